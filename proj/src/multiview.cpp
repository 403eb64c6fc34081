#include "mvc/multiview.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mvc/errors.hpp"
#include "mvc/kernels.hpp"

namespace mvc {

double count_type_classes(int d, int parts) {
    if (d < 0 || parts < 1) throw InvalidInput("count_type_classes: bad arguments");
    return std::round(std::exp(log_binomial_coeff(d + parts - 1, parts - 1)));
}

std::vector<TypeClass> enumerate_type_classes(int d, int output_size,
                                              std::size_t max_type_classes) {
    if (d < 0) throw InvalidInput("enumerate_type_classes: d must be nonnegative");
    if (output_size < 1) throw InvalidInput("enumerate_type_classes: output size must be positive");
    if (count_type_classes(d, output_size) > static_cast<double>(max_type_classes))
        throw BudgetExceeded("enumerate_type_classes: composition count exceeds budget of " +
                             std::to_string(max_type_classes));
    std::vector<TypeClass> out;
    out.reserve(static_cast<std::size_t>(count_type_classes(d, output_size)));
    for_each_type_class(d, output_size, [&](const std::vector<int>& t, double lw) {
        out.push_back({t, LogReal::from_log(lw)});
    });
    return out;
}

namespace {

struct JointWorkspace {
    std::vector<double> log_joint;  // per input, for the current type
};

// fills log_joint[x] = log P_X(x) + log P(type|x); returns true when some
// input has positive mass on this type
bool fill_log_joint(const Dmc& c, const FiniteDistribution& input,
                    const std::vector<int>& t, double log_mult, JointWorkspace& ws) {
    bool any = false;
    for (int x = 0; x < c.input_size(); ++x) {
        double lj = input.log_prob(x);
        if (lj != kNegInf) {
            lj += log_mult;
            for (int y = 0; y < c.output_size(); ++y) {
                const int ty = t[static_cast<std::size_t>(y)];
                if (ty == 0) continue;
                const double lw = c.log_w(x, y);
                if (lw == kNegInf) {
                    lj = kNegInf;
                    break;
                }
                lj += ty * lw;
            }
        }
        ws.log_joint[static_cast<std::size_t>(x)] = lj;
        any = any || lj != kNegInf;
    }
    return any;
}

// -log P(x|type) from the log joints, via the posterior odds against x;
// stays accurate when the posterior is within e-300 of 1
double surprisal_of(const JointWorkspace& ws, int x) {
    const double lx = ws.log_joint[static_cast<std::size_t>(x)];
    double m = kNegInf;
    for (std::size_t i = 0; i < ws.log_joint.size(); ++i) {
        if (static_cast<int>(i) == x) continue;
        m = std::max(m, ws.log_joint[i]);
    }
    if (m == kNegInf) return 0.0;  // x is the only live input
    if (ws.log_joint.size() == 2) return softplus(m - lx);
    kern::Accumulator acc;
    for (std::size_t i = 0; i < ws.log_joint.size(); ++i) {
        if (static_cast<int>(i) == x || ws.log_joint[i] == kNegInf) continue;
        acc.add(std::exp(ws.log_joint[i] - m));
    }
    return softplus(m - lx + std::log(acc.value()));
}

void check_budget(const Dmc& c, int d, const MultiViewOptions& opt, const char* who) {
    if (d < 0) throw InvalidInput(std::string(who) + ": d must be nonnegative");
    if (count_type_classes(d, c.output_size()) > static_cast<double>(opt.max_type_classes))
        throw BudgetExceeded(std::string(who) + ": type-class count exceeds budget of " +
                             std::to_string(opt.max_type_classes));
}

}  // namespace

MultiViewReport multi_view_report(const Dmc& channel, const FiniteDistribution& input,
                                  int d, const MultiViewOptions& opt) {
    if (input.size() != channel.input_size())
        throw InvalidInput("multi_view_report: input distribution size mismatch");
    check_budget(channel, d, opt, "multi_view_report");

    const double h_input = entropy(input);
    const double v_input = varentropy(input);
    const int K = channel.input_size();
    JointWorkspace ws;
    ws.log_joint.resize(static_cast<std::size_t>(K));

    // input-only deviation A_x = -log P(x) - H(X)
    std::vector<double> a_dev(static_cast<std::size_t>(K), 0.0);
    for (int x = 0; x < K; ++x)
        if (input.prob(x) > 0.0) a_dev[static_cast<std::size_t>(x)] = -input.log_prob(x) - h_input;

    // pass 1: conditional entropy and E[(log P(X|Y^d))^2]
    kern::Accumulator h_acc, s2_acc;
    for_each_type_class(d, channel.output_size(), [&](const std::vector<int>& t, double lw) {
        if (!fill_log_joint(channel, input, t, lw, ws)) return;
        for (int x = 0; x < K; ++x) {
            const double lj = ws.log_joint[static_cast<std::size_t>(x)];
            if (lj == kNegInf) continue;
            const double p = std::exp(lj);
            const double s = surprisal_of(ws, x);
            h_acc.add(p * s);
            s2_acc.add(p * s * s);
        }
    });
    const double h_cond = h_acc.value();
    const double e_s2 = s2_acc.value();

    // pass 2: dispersion from the definition, and the cross term
    kern::Accumulator v_acc, theta_acc;
    for_each_type_class(d, channel.output_size(), [&](const std::vector<int>& t, double lw) {
        if (!fill_log_joint(channel, input, t, lw, ws)) return;
        for (int x = 0; x < K; ++x) {
            const double lj = ws.log_joint[static_cast<std::size_t>(x)];
            if (lj == kNegInf) continue;
            const double p = std::exp(lj);
            const double s = surprisal_of(ws, x);
            const double dev = a_dev[static_cast<std::size_t>(x)] + (h_cond - s);
            v_acc.add(p * dev * dev);
            theta_acc.add(p * (h_cond - s) * a_dev[static_cast<std::size_t>(x)]);
        }
    });

    MultiViewReport r;
    r.d = d;
    r.cond_entropy = h_cond;
    r.mutual_info = h_input - h_cond;
    r.dispersion = v_acc.value();
    r.cross_term = 2.0 * theta_acc.value();
    r.dispersion_decomp = v_input + (e_s2 - h_cond * h_cond) + r.cross_term;

    const double mismatch = std::abs(r.dispersion - r.dispersion_decomp);
    if (mismatch > opt.decomposition_tol * std::max({1.0, r.dispersion, r.dispersion_decomp}))
        throw InvariantViolation("multi_view_report: dispersion decomposition mismatch " +
                                 std::to_string(mismatch) + " at d=" + std::to_string(d));
    return r;
}

namespace {

// least squares for y ~ X beta with 3 regressors, modified Gram-Schmidt QR
// with one reorthogonalization pass
std::array<double, 3> lstsq3(std::vector<std::array<double, 3>> x, std::vector<double> y) {
    const std::size_t n = x.size();
    std::array<std::vector<double>, 3> q;
    std::array<std::array<double, 3>, 3> r{};
    for (int j = 0; j < 3; ++j) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = x[i][static_cast<std::size_t>(j)];
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += q[static_cast<std::size_t>(k)][i] * v[i];
                r[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] += proj;
                for (std::size_t i = 0; i < n; ++i) v[i] -= proj * q[static_cast<std::size_t>(k)][i];
            }
        }
        double norm = 0.0;
        for (double vi : v) norm += vi * vi;
        norm = std::sqrt(norm);
        r[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = norm;
        if (norm == 0.0) throw InvalidInput("rate fit: singular design matrix");
        for (double& vi : v) vi /= norm;
        q[static_cast<std::size_t>(j)] = std::move(v);
    }
    std::array<double, 3> qty{};
    for (int j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < n; ++i)
            qty[static_cast<std::size_t>(j)] += q[static_cast<std::size_t>(j)][i] * y[i];
    std::array<double, 3> beta{};
    for (int j = 2; j >= 0; --j) {
        double s = qty[static_cast<std::size_t>(j)];
        for (int k = j + 1; k < 3; ++k)
            s -= r[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
                 beta[static_cast<std::size_t>(k)];
        beta[static_cast<std::size_t>(j)] = s / r[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
    }
    return beta;
}

}  // namespace

ExponentReport fit_convergence_rate(const Dmc& channel, const FiniteDistribution& input,
                                    int d_min, int d_max, RateTarget target,
                                    const MultiViewOptions& opt) {
    if (d_min < 2) throw InvalidInput("fit_convergence_rate: d_min must be at least 2");
    if (d_max < d_min + 2) throw InvalidInput("fit_convergence_rate: window too small");

    const double v_input = varentropy(input);
    std::vector<std::array<double, 3>> design;
    std::vector<double> log_gap;
    for (int d = d_min; d <= d_max; ++d) {
        const MultiViewReport r = multi_view_report(channel, input, d, opt);
        const double gap = target == RateTarget::EntropyGap
                               ? r.cond_entropy
                               : std::abs(v_input - r.dispersion);
        if (!(gap > 1e-290))
            throw InvalidInput("fit_convergence_rate: gap underflows inside the window; "
                               "largest usable d = " + std::to_string(d - 1));
        design.push_back({1.0, static_cast<double>(d), std::log(static_cast<double>(d))});
        log_gap.push_back(std::log(gap));
    }

    const auto beta = lstsq3(std::move(design), std::move(log_gap));
    ExponentReport rep;
    rep.d_min = d_min;
    rep.d_max = d_max;
    rep.fitted_rate = -beta[1];
    rep.predicted_rate = min_pair_chernoff(channel, &input).value;
    rep.relative_gap = (rep.fitted_rate - rep.predicted_rate) / rep.predicted_rate;
    return rep;
}

std::pair<int, int> default_rate_window(const Dmc& channel, const FiniteDistribution& input,
                                        RateTarget target, const MultiViewOptions& opt) {
    const double v_input = varentropy(input);
    int last_ok = -1;
    double work = 0.0;  // cumulative type-class count, so the scan stays cheap
    for (int d = 2; d <= 2000; ++d) {
        const double classes = count_type_classes(d, channel.output_size());
        if (classes > static_cast<double>(opt.max_type_classes)) break;
        work += classes;
        if (work > 1e8) break;
        const MultiViewReport r = multi_view_report(channel, input, d, opt);
        const double gap = target == RateTarget::EntropyGap
                               ? r.cond_entropy
                               : std::abs(v_input - r.dispersion);
        if (!(gap > 1e-290)) break;
        last_ok = d;
    }
    if (last_ok < 5)
        throw InvalidInput("default_rate_window: gap sequence too short before underflow");
    return {std::max(2, last_ok - 19), last_ok};
}

double posterior_tail(const Dmc& channel, const FiniteDistribution& input, int x,
                      int d, double t, const MultiViewOptions& opt) {
    if (x < 0 || x >= channel.input_size()) throw InvalidInput("posterior_tail: bad input symbol");
    if (input.size() != channel.input_size())
        throw InvalidInput("posterior_tail: input distribution size mismatch");
    check_budget(channel, d, opt, "posterior_tail");

    const int K = channel.input_size();
    JointWorkspace ws;
    ws.log_joint.resize(static_cast<std::size_t>(K));
    kern::Accumulator mass;
    for_each_type_class(d, channel.output_size(), [&](const std::vector<int>& tc, double lw) {
        // conditional law P(type|x), without the prior
        double log_cond = lw;
        for (int y = 0; y < channel.output_size(); ++y) {
            const int ty = tc[static_cast<std::size_t>(y)];
            if (ty == 0) continue;
            const double lwxy = channel.log_w(x, y);
            if (lwxy == kNegInf) {
                log_cond = kNegInf;
                break;
            }
            log_cond += ty * lwxy;
        }
        if (log_cond == kNegInf) return;
        if (!fill_log_joint(channel, input, tc, lw, ws)) return;
        if (surprisal_of(ws, x) >= t) mass.add(std::exp(log_cond));
    });
    return std::min(1.0, std::max(0.0, mass.value()));
}

}  // namespace mvc
