#include "mvc/deletion.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "mvc/errors.hpp"
#include "mvc/kernels.hpp"
#include "mvc/prob.hpp"

namespace mvc {

BinaryString BinaryString::from_string(const std::string& s) {
    if (s.size() > 64) throw InvalidInput("binary string longer than 64");
    BinaryString b{0, static_cast<int>(s.size())};
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] == '1')
            b.bits |= std::uint64_t{1} << j;
        else if (s[j] != '0')
            throw InvalidInput("binary string: characters must be 0 or 1");
    }
    return b;
}

BinaryString BinaryString::zeros(int n) {
    if (n < 0 || n > 64) throw InvalidInput("binary string longer than 64");
    return {0, n};
}

BinaryString BinaryString::alternating(int n) {
    if (n < 0 || n > 64) throw InvalidInput("binary string longer than 64");
    BinaryString b{0, n};
    for (int j = 1; j < n; j += 2) b.bits |= std::uint64_t{1} << j;
    return b;
}

std::string BinaryString::str() const {
    std::string s(static_cast<std::size_t>(length), '0');
    for (int j = 0; j < length; ++j)
        if ((bits >> j) & 1) s[static_cast<std::size_t>(j)] = '1';
    return s;
}

BinaryString BinaryString::complemented() const {
    const std::uint64_t mask = length == 64 ? ~std::uint64_t{0}
                                            : (std::uint64_t{1} << length) - 1;
    return {~bits & mask, length};
}

BinaryString BinaryString::reversed() const {
    BinaryString r{0, length};
    for (int j = 0; j < length; ++j)
        if ((bits >> j) & 1) r.bits |= std::uint64_t{1} << (length - 1 - j);
    return r;
}

std::uint64_t subsequence_count(const BinaryString& u, const BinaryString& v) {
    if (v.length > u.length) throw InvalidInput("subsequence_count: |v| > |u|");
    std::vector<std::uint64_t> dp(static_cast<std::size_t>(v.length) + 1, 0);
    dp[0] = 1;
    for (int i = 0; i < u.length; ++i) {
        const int c = (u.bits >> i) & 1;
        const int top = std::min(v.length, i + 1);
        for (int j = top; j >= 1; --j)
            if (((v.bits >> (j - 1)) & 1) == static_cast<std::uint64_t>(c))
                dp[static_cast<std::size_t>(j)] += dp[static_cast<std::size_t>(j) - 1];
    }
    return dp[static_cast<std::size_t>(v.length)];
}

CountTable CountTable::build(const BinaryString& x, std::size_t max_entries) {
    const int n = x.length;
    std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> lv(static_cast<std::size_t>(n) + 1);
    lv[0][0] = 1;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t c = (x.bits >> i) & 1;
        for (int m = std::min(n, i + 1); m >= 1; --m) {
            for (const auto& [y, cnt] : lv[static_cast<std::size_t>(m) - 1]) {
                auto [it, fresh] =
                    lv[static_cast<std::size_t>(m)].try_emplace(y | (c << (m - 1)), 0);
                it->second += cnt;
                if (fresh && ++total > max_entries)
                    throw BudgetExceeded("count table: distinct-subsequence count exceeds " +
                                         std::to_string(max_entries) + " entries");
            }
        }
    }
    CountTable t;
    t.n_ = n;
    t.total_ = total;
    t.levels_.resize(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        auto& out = t.levels_[static_cast<std::size_t>(m)];
        out.assign(lv[static_cast<std::size_t>(m)].begin(), lv[static_cast<std::size_t>(m)].end());
        std::sort(out.begin(), out.end());
    }
    return t;
}

namespace {

// merge the per-length tables of a pair into the affine form of f_lambda
void build_pair_terms(const CountTable& cx, const CountTable& cxt, int n, double delta,
                      std::vector<double>& base, std::vector<double>& slope) {
    base.clear();
    slope.clear();
    const double ld = std::log(delta);
    const double l1d = std::log1p(-delta);
    for (int m = 0; m <= n; ++m) {
        const double lweight = (n - m) * ld + m * l1d;
        const auto& a = cx.level(m);
        const auto& b = cxt.level(m);
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i].first < b[j].first) {
                ++i;
            } else if (b[j].first < a[i].first) {
                ++j;
            } else {
                const double lnx = std::log(static_cast<double>(a[i].second));
                const double lnxt = std::log(static_cast<double>(b[j].second));
                base.push_back(lweight + lnx);
                slope.push_back(lnxt - lnx);
                ++i;
                ++j;
            }
        }
    }
}

double f_lambda_terms(const std::vector<double>& base, const std::vector<double>& slope,
                      double lam) {
    if (lam == 0.0 || lam == 1.0) return 1.0;
    return kern::exp_affine_sum(base, slope, lam);
}

double rho_from_terms(const std::vector<double>& base, const std::vector<double>& slope) {
    if (base.empty()) return kPosInf;  // no common subsequence mass at all
    auto neg_log_f = [&](double lam) {
        return -std::log(kern::exp_affine_sum(base, slope, lam));
    };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (neg_log_f(m1) >= neg_log_f(m2))
            hi = m2;
        else
            lo = m1;
    }
    return std::max(0.0, neg_log_f(0.5 * (lo + hi)));
}

void validate_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("deletion: delta must be in (0,1)");
}

}  // namespace

DeletionInstance DeletionInstance::make(const BinaryString& x, const BinaryString& x_tilde,
                                        double delta, std::size_t max_table_entries) {
    validate_delta(delta);
    if (x.length != x_tilde.length) throw InvalidInput("deletion: strings must share a length");
    if (x.length < 1) throw InvalidInput("deletion: empty strings");
    DeletionInstance inst;
    inst.n = x.length;
    inst.delta = delta;
    inst.x = x;
    inst.x_tilde = x_tilde;
    inst.count_x = CountTable::build(x, max_table_entries);
    inst.count_x_tilde = CountTable::build(x_tilde, max_table_entries);
    build_pair_terms(inst.count_x, inst.count_x_tilde, inst.n, delta, inst.log_term_base,
                     inst.log_term_slope);
    return inst;
}

double f_lambda(const DeletionInstance& inst, double lam) {
    if (!(lam >= 0.0 && lam <= 1.0)) throw InvalidInput("f_lambda: lambda outside [0,1]");
    return f_lambda_terms(inst.log_term_base, inst.log_term_slope, lam);
}

double rho_pair(const DeletionInstance& inst) {
    if (inst.x == inst.x_tilde) throw InvalidInput("rho_pair: strings must differ");
    return rho_from_terms(inst.log_term_base, inst.log_term_slope);
}

double bound_fractional(std::int64_t n, double delta) {
    if (n < 1) throw InvalidInput("bound_fractional: n must be positive");
    validate_delta(delta);
    std::vector<double> log_mass, log_k;
    log_mass.reserve(static_cast<std::size_t>(n));
    log_k.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 1; k <= n; ++k) {
        const LogReal mass = binomial_pmf(n, k, delta);
        if (mass.is_zero()) continue;
        log_mass.push_back(mass.log());
        log_k.push_back(std::log(static_cast<double>(k)));
    }
    const double log_n = std::log(static_cast<double>(n));
    auto objective = [&](double lam) {
        return lam * log_n - kern::log_sum_exp_affine(log_mass, log_k, lam);
    };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (objective(m1) >= objective(m2))
            hi = m2;
        else
            lo = m1;
    }
    return std::max(0.0, objective(0.5 * (lo + hi)));
}

double bound_alternating(int n, double delta, std::size_t max_table_entries) {
    if (n < 2 || n % 2 != 0) throw InvalidInput("bound_alternating: n must be even and >= 2");
    const BinaryString x = BinaryString::alternating(n);
    return rho_pair(DeletionInstance::make(x, x.complemented(), delta, max_table_entries));
}

namespace {

// canonical representative of the pair orbit under complementation/reversal
std::pair<std::uint64_t, std::uint64_t> canonical_pair(const BinaryString& a,
                                                       const BinaryString& b) {
    auto norm = [](const BinaryString& u, const BinaryString& v) {
        return u.bits <= v.bits ? std::make_pair(u.bits, v.bits) : std::make_pair(v.bits, u.bits);
    };
    auto best = norm(a, b);
    best = std::min(best, norm(a.complemented(), b.complemented()));
    best = std::min(best, norm(a.reversed(), b.reversed()));
    best = std::min(best, norm(a.complemented().reversed(), b.complemented().reversed()));
    return best;
}

}  // namespace

RhoBoundReport rho_n_exact(int n, double delta, const RhoOptions& opt,
                           std::vector<PairTrace>* trace) {
    validate_delta(delta);
    if (n < 1) throw InvalidInput("rho_n_exact: n must be positive");
    if (n > opt.max_n)
        throw BudgetExceeded("rho_n_exact: n=" + std::to_string(n) +
                             " exceeds the pair-search budget (max_n=" +
                             std::to_string(opt.max_n) + "); raise it explicitly");

    RhoBoundReport rep;
    rep.n = n;
    rep.delta = delta;
    rep.bound_naive = -n * std::log(delta);
    rep.bound_fractional = bound_fractional(n, delta);
    {
        const BinaryString alt = BinaryString::alternating(n);
        DeletionInstance inst =
            DeletionInstance::make(alt, alt.complemented(), delta, opt.max_table_entries);
        rep.bound_alternating = rho_pair(inst);
    }

    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<CountTable> tables;
    tables.reserve(count);
    for (std::uint64_t s = 0; s < count; ++s)
        tables.push_back(CountTable::build({s, n}, opt.max_table_entries));

    // canonical unordered pairs only; both symmetries commute with iid deletion
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint64_t a = 0; a < count; ++a) {
        for (std::uint64_t b = a + 1; b < count; ++b) {
            if (canonical_pair({a, n}, {b, n}) == std::make_pair(a, b))
                pairs.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
        }
    }

    struct Best {
        double value = kPosInf;
        std::uint64_t a = 0, b = 0;
    };
    std::vector<double> pair_rho(pairs.size());
    const int threads = opt.threads > 0
                            ? opt.threads
                            : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto worker = [&](std::size_t begin, std::size_t end) {
        std::vector<double> base, slope;
        for (std::size_t i = begin; i < end; ++i) {
            build_pair_terms(tables[pairs[i].first], tables[pairs[i].second], n, delta, base,
                             slope);
            pair_rho[i] = rho_from_terms(base, slope);
        }
    };
    if (threads <= 1 || pairs.size() < 64) {
        worker(0, pairs.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (pairs.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::size_t begin = std::min(pairs.size(), t * chunk);
            const std::size_t end = std::min(pairs.size(), begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    Best best;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pair_rho[i] < best.value) best = {pair_rho[i], pairs[i].first, pairs[i].second};
    }
    rep.rho_exact = best.value;
    rep.argmin_pair = {BinaryString{best.a, n}.str(), BinaryString{best.b, n}.str()};

    if (trace) {
        trace->clear();
        trace->reserve(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i)
            trace->push_back({BinaryString{pairs[i].first, n}.str(),
                              BinaryString{pairs[i].second, n}.str(), pair_rho[i]});
    }
    return rep;
}

}  // namespace mvc
