#include "mvc/largedev.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mvc/errors.hpp"
#include "mvc/kernels.hpp"

namespace mvc {

LlrProfile LlrProfile::make(FiniteDistribution base, FiniteDistribution alt) {
    if (base.size() != alt.size()) throw InvalidInput("llr profile: alphabet mismatch");
    LlrProfile p;
    p.llr.resize(static_cast<std::size_t>(base.size()), 0.0);
    for (int y = 0; y < base.size(); ++y) {
        const double lb = base.log_prob(y), la = alt.log_prob(y);
        double l = 0.0;
        if (lb == kNegInf && la == kNegInf)
            l = 0.0;  // letter outside both supports, never used
        else if (lb == kNegInf)
            l = kNegInf;
        else if (la == kNegInf)
            l = kPosInf;
        else
            l = lb - la;
        p.llr[static_cast<std::size_t>(y)] = l;
    }
    p.base = std::move(base);
    p.alt = std::move(alt);
    return p;
}

LlrProfile LlrProfile::from_rows(const Dmc& channel, int x, int x_tilde) {
    return make(channel.row(x), channel.row(x_tilde));
}

double LlrProfile::mean_llr() const {
    kern::Accumulator acc;
    for (int y = 0; y < base.size(); ++y) {
        if (base.prob(y) <= 0.0) continue;
        if (llr[static_cast<std::size_t>(y)] == kPosInf) return kPosInf;
        acc.add(base.prob(y) * llr[static_cast<std::size_t>(y)]);
    }
    return acc.value();
}

double LlrProfile::min_llr() const {
    double m = kPosInf;
    for (int y = 0; y < base.size(); ++y)
        if (base.prob(y) > 0.0) m = std::min(m, llr[static_cast<std::size_t>(y)]);
    return m;
}

TiltedFamily::TiltedFamily(LlrProfile profile) : profile_(std::move(profile)) {
    for (int y = 0; y < profile_.base.size(); ++y) {
        if (profile_.base.prob(y) > 0.0 && profile_.alt.prob(y) > 0.0) {
            common_.push_back(y);
            log_base_.push_back(profile_.base.log_prob(y));
            neg_llr_.push_back(-profile_.llr[static_cast<std::size_t>(y)]);
        }
    }
}

double TiltedFamily::log_partition(double lambda) const {
    if (lambda == 0.0) return 0.0;  // Z(0) = sum of base = 1 exactly
    if (common_.empty()) return kNegInf;
    return kern::log_sum_exp_affine(log_base_, neg_llr_, lambda);
}

FiniteDistribution TiltedFamily::tilted(double lambda) const {
    if (lambda == 0.0) return profile_.base;
    if (common_.empty()) throw InvalidInput("tilted family: empty common support");
    const double lz = log_partition(lambda);
    std::vector<double> q(static_cast<std::size_t>(profile_.base.size()), 0.0);
    kern::Accumulator total;
    for (std::size_t i = 0; i < common_.size(); ++i) {
        const double v = std::exp(log_base_[i] + lambda * neg_llr_[i] - lz);
        q[static_cast<std::size_t>(common_[i])] = v;
        total.add(v);
    }
    // wash out the last-ulp normalization error
    for (double& v : q) v /= total.value();
    return FiniteDistribution::from_probs(std::move(q));
}

double TiltedFamily::tilted_mean_llr(double lambda) const {
    const FiniteDistribution q = tilted(lambda);
    kern::Accumulator acc;
    for (int y = 0; y < q.size(); ++y) {
        if (q.prob(y) <= 0.0) continue;
        acc.add(q.prob(y) * profile_.llr[static_cast<std::size_t>(y)]);
    }
    return acc.value();
}

namespace {

// concave objective phi(lambda) = -log Z(lambda) - lambda v
double maximize_phi(const TiltedFamily& family, double v, double lambda_hi) {
    auto phi = [&](double lam) { return -family.log_partition(lam) - lam * v; };
    double lo = 0.0, hi = lambda_hi;
    const double tol = 1e-12 * std::max(1.0, hi);
    while (hi - lo > tol) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (phi(m1) >= phi(m2))
            hi = m2;
        else
            lo = m1;
    }
    return std::max(0.0, phi(0.5 * (lo + hi)));
}

double exponent_impl(const LlrProfile& profile, double v, bool restricted) {
    const TiltedFamily family(profile);
    const double vmin = profile.min_llr();
    if (v < vmin) return kPosInf;  // the event is impossible
    const double mean = profile.mean_llr();
    if (!(mean == kPosInf) && v >= mean) return 0.0;  // lambda* = 0

    if (restricted) return maximize_phi(family, v, 1.0);

    // expand the bracket until the concave objective turns over
    auto phi = [&](double lam) { return -family.log_partition(lam) - lam * v; };
    double hi = 1.0;
    while (hi < 1e9 && phi(2.0 * hi) > phi(hi)) hi *= 2.0;
    return maximize_phi(family, v, 2.0 * hi);
}

}  // namespace

double exponent(const LlrProfile& profile, double v) {
    return exponent_impl(profile, v, false);
}

double exponent_restricted(const LlrProfile& profile, double v) {
    return exponent_impl(profile, v, true);
}

namespace {

struct OracleSetup {
    std::vector<double> log_base;  // over the feasible support
    std::vector<double> llr;
};

// projection onto the probability simplex (Michelot)
void project_simplex(std::vector<double>& q) {
    std::vector<double> u = q;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, tau = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        const double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) tau = t;
    }
    for (double& v : q) v = std::max(0.0, v - tau);
}

double kl_to_base(const std::vector<double>& q, const OracleSetup& s) {
    kern::Accumulator acc;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] <= 0.0) continue;
        acc.add(q[i] * (std::log(q[i]) - s.log_base[i]));
    }
    return std::max(0.0, acc.value());
}

double constraint(const std::vector<double>& q, const OracleSetup& s) {
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) v += q[i] * s.llr[i];
    return v;
}

}  // namespace

double primal_sanov_oracle(const LlrProfile& profile, double v, int grid_resolution) {
    if (profile.base.size() > 4)
        throw InvalidInput("primal_sanov_oracle: alphabet too large for the grid");
    if (grid_resolution < 8) throw InvalidInput("primal_sanov_oracle: resolution too small");
    {
        // composition count (R + k - 1 choose k - 1) must stay enumerable
        const double cells =
            std::exp(log_binomial_coeff(grid_resolution + profile.base.size() - 1,
                                        profile.base.size() - 1));
        if (!(cells <= 2e7))
            throw BudgetExceeded("primal_sanov_oracle: grid would have ~" +
                                 std::to_string(cells) +
                                 " points; lower the resolution for this alphabet");
    }

    // Q must live on the common support: mass outside base's support makes
    // D infinite, and mass on a +inf llr letter breaks the constraint.
    OracleSetup s;
    for (int y = 0; y < profile.base.size(); ++y) {
        if (profile.base.prob(y) <= 0.0) continue;
        if (profile.llr[static_cast<std::size_t>(y)] == kPosInf) continue;
        s.log_base.push_back(profile.base.log_prob(y));
        s.llr.push_back(profile.llr[static_cast<std::size_t>(y)]);
    }
    const std::size_t dim = s.llr.size();
    if (dim == 0) return kPosInf;
    if (profile.mean_llr() <= v) return 0.0;  // Q = base is feasible

    const int R = grid_resolution;
    std::vector<double> log_k(static_cast<std::size_t>(R) + 1, 0.0);
    for (int k = 1; k <= R; ++k)
        log_k[static_cast<std::size_t>(k)] =
            std::log(static_cast<double>(k)) - std::log(static_cast<double>(R));

    double best = kPosInf;
    std::vector<double> best_q;
    std::vector<int> counts(dim, 0);
    std::vector<double> q(dim, 0.0);
    auto consider = [&]() {
        double lv = 0.0, d = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double qi = static_cast<double>(counts[i]) / R;
            lv += qi * s.llr[i];
            if (counts[i] > 0)
                d += qi * (log_k[static_cast<std::size_t>(counts[i])] - s.log_base[i]);
        }
        if (lv <= v && d < best) {
            best = d;
            for (std::size_t i = 0; i < dim; ++i) q[i] = static_cast<double>(counts[i]) / R;
            best_q = q;
        }
    };
    auto rec = [&](auto&& self, std::size_t idx, int remaining) -> void {
        if (idx == dim - 1) {
            counts[idx] = remaining;
            consider();
            return;
        }
        for (int c = remaining; c >= 0; --c) {
            counts[idx] = c;
            self(self, idx + 1, remaining - c);
        }
    };
    rec(rec, 0, R);
    if (best == kPosInf) return kPosInf;

    // projected-gradient polish from the best grid point
    std::vector<double> cur = best_q;
    double step = 1.0 / R;
    for (int it = 0; it < 400; ++it) {
        std::vector<double> trial = cur;
        for (std::size_t i = 0; i < dim; ++i) {
            const double qi = std::max(trial[i], 1e-12);
            trial[i] -= step * (std::log(qi) - s.log_base[i] + 1.0);
        }
        for (int rounds = 0; rounds < 40; ++rounds) {
            project_simplex(trial);
            const double excess = constraint(trial, s) - v;
            if (excess <= 1e-13) break;
            double nrm = 0.0;
            for (double l : s.llr) nrm += l * l;
            for (std::size_t i = 0; i < dim; ++i) trial[i] -= excess * s.llr[i] / nrm;
        }
        if (constraint(trial, s) <= v + 1e-10) {
            const double d = kl_to_base(trial, s);
            if (d < best) {
                best = d;
                cur = trial;
                continue;
            }
        }
        step *= 0.5;
        if (step < 1e-14) break;
    }
    return best;
}

double gamma_probability(const Dmc& channel, const FiniteDistribution& input, int x,
                         int x_tilde, int d, double z, double c,
                         const MultiViewOptions& opt) {
    if (x == x_tilde) throw InvalidInput("gamma_probability: x and x_tilde must differ");
    if (x < 0 || x >= channel.input_size() || x_tilde < 0 || x_tilde >= channel.input_size())
        throw InvalidInput("gamma_probability: input symbol out of range");
    if (!(z > 0.0)) throw InvalidInput("gamma_probability: z must be positive");
    if (!(c > 0.0)) throw InvalidInput("gamma_probability: c must be positive");
    if (input.size() != channel.input_size())
        throw InvalidInput("gamma_probability: input distribution size mismatch");
    if (count_type_classes(d, channel.output_size()) >
        static_cast<double>(opt.max_type_classes))
        throw BudgetExceeded("gamma_probability: type-class count exceeds budget");

    // event: sum_y t_y llr_y <= log(c e^{-z}/(1-e^{-z})) - log(P(x)/P(x~))
    const double thr = std::log(c) - z - std::log(-std::expm1(-z)) -
                       (input.log_prob(x) - input.log_prob(x_tilde));
    const LlrProfile profile = LlrProfile::from_rows(channel, x, x_tilde);

    kern::Accumulator mass;
    for_each_type_class(d, channel.output_size(), [&](const std::vector<int>& t, double lw) {
        double log_cond = lw;
        double llr_sum = 0.0;
        for (int y = 0; y < channel.output_size(); ++y) {
            const int ty = t[static_cast<std::size_t>(y)];
            if (ty == 0) continue;
            const double lwxy = channel.log_w(x, y);
            if (lwxy == kNegInf) {
                log_cond = kNegInf;
                break;
            }
            log_cond += ty * lwxy;
            const double l = profile.llr[static_cast<std::size_t>(y)];
            llr_sum = l == kPosInf ? kPosInf : llr_sum + ty * l;
        }
        if (log_cond == kNegInf) return;
        if (llr_sum <= thr) mass.add(std::exp(log_cond));
    });
    return std::min(1.0, std::max(0.0, mass.value()));
}

}  // namespace mvc
