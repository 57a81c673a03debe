#include "thermalab/eth.hpp"

#include "thermalab/errors.hpp"
#include "thermalab/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace thermalab::eth {

double EthFit::e_center(std::size_t i) const {
    const double w = (e_hi - e_lo) / double(opt.n_e_bins);
    return e_lo + (double(i) + 0.5) * w;
}

double EthFit::omega_center(std::size_t j) const {
    const double w = 2.0 * opt.omega_max / double(n_omega_total());
    return -opt.omega_max + (double(j) + 0.5) * w;
}

bool EthFit::bin_ok(std::size_t e_bin, std::size_t omega_bin) const {
    return bin_valid[e_bin * n_omega_total() + omega_bin] != 0;
}

double EthFit::f2_raw(double e, double omega) const {
    if (e < e_lo || e > e_hi || std::abs(omega) > opt.omega_max) return 0.0;
    const auto ne = opt.n_e_bins;
    const auto no = n_omega_total();
    auto ei = static_cast<std::size_t>(
        std::min(double(ne - 1), std::floor((e - e_lo) / (e_hi - e_lo) * double(ne))));
    auto oj = static_cast<std::size_t>(std::min(
        double(no - 1),
        std::floor((omega + opt.omega_max) / (2.0 * opt.omega_max) * double(no))));
    const std::size_t flat = ei * no + oj;
    if (!bin_valid[flat]) return 0.0;
    // second moment about zero: the ansatz off-diagonals are zero-centered
    const auto& acc = bins[flat];
    return acc.n ? acc.sum_sq / double(acc.n) : 0.0;
}

double EthFit::mean_f2_below(double omega_cut) const {
    double s = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < opt.n_e_bins; ++i)
        for (std::size_t j = 0; j < n_omega_total(); ++j) {
            if (std::abs(omega_center(j)) > omega_cut) continue;
            const std::size_t flat = i * n_omega_total() + j;
            if (!bin_valid[flat] || bins[flat].n == 0) continue;
            s += bins[flat].sum_sq / double(bins[flat].n);
            ++cnt;
        }
    return cnt ? s / double(cnt) : 0.0;
}

EthAccumulator::EthAccumulator(FitOptions opt, double spectrum_lo, double spectrum_hi)
    : opt_(opt) {
    if (spectrum_hi <= spectrum_lo)
        throw InvalidArgument("EthAccumulator: empty spectrum range");
    const double mid = 0.5 * (spectrum_lo + spectrum_hi);
    const double half = 0.5 * (spectrum_hi - spectrum_lo) * opt.e_fraction;
    e_lo_ = mid - half;
    e_hi_ = mid + half;
    bins_.assign(opt.n_e_bins * 2 * opt.n_omega_bins, {});
}

void EthAccumulator::add_realization(const Observable& a, const std::vector<double>& eigvals,
                                     const Matrix& vectors, kernels::Exec exec) {
    const std::size_t n = eigvals.size();
    if (a.dim() != vectors.rows() || vectors.cols() != n)
        throw DimensionMismatch("EthAccumulator: size mismatch");
    const std::size_t no = 2 * opt_.n_omega_bins;
    const double omega_max = opt_.omega_max;

    // T = A O once; selected elements A'_{ab} = (O col a) . (T col b)
    Matrix t = a.apply(vectors, exec);
    const std::size_t rows = vectors.rows();

    auto col_dot = [&](std::size_t ca, std::size_t cb) {
        double s = 0.0;
        for (std::size_t m = 0; m < rows; ++m) s += vectors(m, ca) * t(m, cb);
        return s;
    };

    for (std::size_t al = 0; al < n; ++al) {
        const double ea = eigvals[al];
        // diagonal curve points over a slightly wider window
        if (ea >= e_lo_ - opt_.window && ea <= e_hi_ + opt_.window)
            diag_points_.emplace_back(ea, col_dot(al, al));
        for (std::size_t be = al + 1; be < n; ++be) {
            const double omega = eigvals[be] - ea;
            if (omega > omega_max) break;
            const double e_mid = 0.5 * (ea + eigvals[be]);
            if (e_mid < e_lo_ || e_mid > e_hi_) continue;
            const double v = col_dot(al, be);
            const auto ei = static_cast<std::size_t>(std::min(
                double(opt_.n_e_bins - 1),
                std::floor((e_mid - e_lo_) / (e_hi_ - e_lo_) * double(opt_.n_e_bins))));
            const auto oj_pos = static_cast<std::size_t>(std::min(
                double(no - 1), std::floor((omega + omega_max) / (2.0 * omega_max) * double(no))));
            const std::size_t oj_neg = no - 1 - oj_pos;
            // A real symmetric: the (a,b) and (b,a) elements are equal, so the
            // ordered-pair sum populates the +omega and -omega bins alike.
            bins_[ei * no + oj_pos].add(v);
            bins_[ei * no + oj_neg].add(v);
            samples_.emplace_back(static_cast<std::uint32_t>(ei * no + oj_pos),
                                  static_cast<float>(v));
        }
    }
}

void EthAccumulator::merge(const EthAccumulator& other) {
    if (other.bins_.size() != bins_.size())
        throw DimensionMismatch("EthAccumulator::merge: incompatible geometry");
    for (std::size_t i = 0; i < bins_.size(); ++i) bins_[i].merge(other.bins_[i]);
    samples_.insert(samples_.end(), other.samples_.begin(), other.samples_.end());
    diag_points_.insert(diag_points_.end(), other.diag_points_.begin(),
                        other.diag_points_.end());
}

EthFit EthAccumulator::finalize() const {
    EthFit fit;
    fit.opt = opt_;
    fit.e_lo = e_lo_;
    fit.e_hi = e_hi_;
    fit.bins = bins_;
    fit.bin_valid.assign(bins_.size(), 0);
    for (std::size_t i = 0; i < bins_.size(); ++i)
        fit.bin_valid[i] = bins_[i].n >= opt_.min_bin_count ? 1 : 0;
    fit.s_eff = opt_.corr_n > 0.0 ? std::log(opt_.corr_n) : 0.0;

    // standardized residuals against their own bin's second moment
    fit.r_samples.reserve(samples_.size());
    for (const auto& [flat, v] : samples_) {
        if (!fit.bin_valid[flat]) continue;
        const double m2 = bins_[flat].sum_sq / double(bins_[flat].n);
        if (m2 <= 0.0) continue;
        fit.r_samples.push_back(double(v) / std::sqrt(m2));
    }

    // moving-average diagonal curve at the E bin centers
    std::vector<std::pair<double, double>> pts(diag_points_);
    std::sort(pts.begin(), pts.end());
    fit.curve_e.resize(opt_.n_e_bins);
    fit.curve_a.resize(opt_.n_e_bins);
    for (std::size_t i = 0; i < opt_.n_e_bins; ++i) {
        const double c = fit.e_center(i);
        fit.curve_e[i] = c;
        auto lo = std::lower_bound(pts.begin(), pts.end(),
                                   std::make_pair(c - opt_.window, -1e300));
        auto hi = std::upper_bound(pts.begin(), pts.end(),
                                   std::make_pair(c + opt_.window, 1e300));
        double s = 0.0;
        std::size_t cnt = 0;
        for (auto it = lo; it != hi; ++it) {
            s += it->second;
            ++cnt;
        }
        fit.curve_a[i] = cnt ? s / double(cnt) : 0.0;
    }
    return fit;
}

EthFit fit_eth(const Observable& a, const std::vector<double>& eigvals, const Matrix& vectors,
               FitOptions opt, kernels::Exec exec) {
    EthAccumulator acc(opt, eigvals.front(), eigvals.back());
    acc.add_realization(a, eigvals, vectors, exec);
    return acc.finalize();
}

GaussianityReport gaussianity_test(const EthFit& fit) {
    if (fit.r_samples.size() < 10000)
        throw TooFewSamples("gaussianity_test: need >= 1e4 residuals");
    GaussianityReport rep;
    rep.count = fit.r_samples.size();
    rep.kurtosis = stats::excess_kurtosis(fit.r_samples);
    rep.ks_distance = stats::ks_statistic(fit.r_samples, stats::normal_cdf);
    return rep;
}

ScalingReport scaling_check(const std::vector<EthFit>& fits) {
    if (fits.size() < 3) throw InsufficientSpan("scaling_check: need >= 3 sizes");
    ScalingReport rep;
    for (const auto& f : fits) {
        if (f.opt.corr_n <= 0.0)
            throw InvalidArgument("scaling_check: fits must carry corr_n");
        const double v = f.mean_f2_below(f.opt.delta);
        if (v <= 0.0) throw InvalidArgument("scaling_check: empty small-omega bins");
        rep.log_n.push_back(std::log(f.opt.corr_n));
        rep.log_var.push_back(std::log(v));
    }
    const auto [mn, mx] = std::minmax_element(rep.log_n.begin(), rep.log_n.end());
    if (*mx - *mn < std::log(4.0) - 1e-9)
        throw InsufficientSpan("scaling_check: sizes must span a factor >= 4");
    auto line = stats::fit_line(rep.log_n, rep.log_var);
    rep.slope = line.slope;
    rep.slope_stderr = line.slope_stderr;
    return rep;
}

std::vector<double> eth_variance_prediction(const EthFit& fit, const StatisticalOperator& pi,
                                            const std::vector<double>& eigvals,
                                            const Matrix& vectors,
                                            const std::vector<double>& times,
                                            kernels::Exec exec) {
    const std::size_t n = eigvals.size();
    if (pi.dim() != vectors.rows() || vectors.cols() != n)
        throw DimensionMismatch("eth_variance_prediction: size mismatch");
    Matrix pi_rot = pi.rotate(vectors, exec);
    Matrix m(n, n);
    double static_part = 0.0;
    for (std::size_t al = 0; al < n; ++al)
        for (std::size_t be = 0; be < n; ++be) {
            const double omega = eigvals[al] - eigvals[be];
            const double e_mid = 0.5 * (eigvals[al] + eigvals[be]);
            const double w = fit.f2_raw(e_mid, omega) * pi_rot(al, be) * pi_rot(al, be);
            m(al, be) = w;
            static_part += w;
        }
    std::vector<double> doubled(n);
    for (std::size_t i = 0; i < n; ++i) doubled[i] = 2.0 * eigvals[i];
    std::vector<double> osc = kernels::cos_weighted_series(m, doubled, times, exec);
    std::vector<double> out(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) out[j] = static_part + osc[j];
    return out;
}

std::vector<double> c_of_t(const EthFit& fit, double e_center, const std::vector<double>& times) {
    if (e_center < fit.e_lo || e_center > fit.e_hi)
        throw EmptyBin("c_of_t: e_center outside the analysed range");
    const auto ne = fit.opt.n_e_bins;
    const auto no = fit.n_omega_total();
    auto ei = static_cast<std::size_t>(std::min(
        double(ne - 1),
        std::floor((e_center - fit.e_lo) / (fit.e_hi - fit.e_lo) * double(ne))));
    std::vector<double> f2(no, 0.0);
    double norm = 0.0;
    bool any = false;
    for (std::size_t j = 0; j < no; ++j) {
        const std::size_t flat = ei * no + j;
        if (!fit.bin_valid[flat] || fit.bins[flat].n == 0) continue;
        f2[j] = fit.bins[flat].sum_sq / double(fit.bins[flat].n);
        norm += f2[j];
        any = true;
    }
    if (!any || norm <= 0.0) throw EmptyBin("c_of_t: no valid bins in the selected row");
    std::vector<double> out(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < no; ++j) {
            if (f2[j] == 0.0) continue;
            s += f2[j] * std::cos(fit.omega_center(j) * times[k]);
        }
        out[k] = s / norm;
    }
    return out;
}

FluctuationReport thermal_fluctuation_bound(const Observable& a,
                                            const std::vector<double>& eigvals,
                                            const Matrix& vectors,
                                            const StatisticalOperator& pi, double delta,
                                            kernels::Exec exec) {
    if (delta <= 0.0) throw InvalidArgument("thermal_fluctuation_bound: delta must be > 0");
    const std::size_t n = eigvals.size();
    const auto st = dynamics::energy_stats(pi, eigvals, vectors, exec);
    Matrix a_rot = a.rotate(vectors, exec);

    const double cut = 4.0 * delta;
    double wsum = 0.0, a_mean = 0.0, a2_mean = 0.0;
    std::vector<double> xs, ys, ws;
    std::size_t inside = 0;
    for (std::size_t al = 0; al < n; ++al) {
        const double x = eigvals[al] - st.mean_e;
        if (std::abs(x) > cut) continue;
        ++inside;
        const double w = std::exp(-x * x / (2.0 * delta * delta));
        const double d = a_rot(al, al);
        double rowsq = 0.0;
        for (std::size_t be = 0; be < n; ++be) rowsq += a_rot(al, be) * a_rot(al, be);
        wsum += w;
        a_mean += w * d;
        a2_mean += w * rowsq;
        xs.push_back(eigvals[al]);
        ys.push_back(d);
        ws.push_back(w);
    }
    if (inside < 10)
        throw TooFewStates("thermal_fluctuation_bound: fewer than 10 states in the window");
    a_mean /= wsum;
    a2_mean /= wsum;

    FluctuationReport rep;
    rep.difference = a2_mean - a_mean * a_mean;
    rep.delta_s_sq = st.delta_s * st.delta_s;
    rep.curve_slope = stats::fit_line_weighted(xs, ys, ws).slope;
    const double denom = rep.delta_s_sq * rep.curve_slope * rep.curve_slope;
    rep.ratio = denom > 0.0 ? rep.difference / denom : 0.0;
    return rep;
}

} // namespace thermalab::eth
