#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// Deletion-channel quantities: exact subsequence counts, the f_lambda
// series, the exact convergence rate rho_n for small n, and the three
// feasible-pair upper bounds. Counts are exact 64-bit integers (they top
// out at C(64,32)); everything enters the log domain only inside f_lambda.
namespace mvc {

struct BinaryString {
    std::uint64_t bits = 0;  // bit j = character at position j
    int length = 0;

    static BinaryString from_string(const std::string& s);
    static BinaryString zeros(int n);
    static BinaryString alternating(int n);  // 0101...
    std::string str() const;
    BinaryString complemented() const;
    BinaryString reversed() const;
    bool operator==(const BinaryString& o) const { return bits == o.bits && length == o.length; }
};

// N(u -> v): occurrences of v as a (non-contiguous) subsequence of u
std::uint64_t subsequence_count(const BinaryString& u, const BinaryString& v);

// All N(x -> y^m) for m = 0..n, sparse per output length, sorted by the
// packed bits of y.
class CountTable {
  public:
    static CountTable build(const BinaryString& x, std::size_t max_entries = 4'000'000);
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& level(int m) const {
        return levels_[static_cast<std::size_t>(m)];
    }
    int n() const { return n_; }
    std::size_t total_entries() const { return total_; }

  private:
    std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> levels_;
    int n_ = 0;
    std::size_t total_ = 0;
};

struct DeletionInstance {
    int n = 0;
    double delta = 0.0;
    BinaryString x, x_tilde;
    CountTable count_x, count_x_tilde;

    // per common-support output: a = length-weights + log N(x->y),
    // b = log N(x_tilde->y) - log N(x->y); f_lambda is sum exp(a + lambda b)
    std::vector<double> log_term_base;
    std::vector<double> log_term_slope;

    static DeletionInstance make(const BinaryString& x, const BinaryString& x_tilde,
                                 double delta, std::size_t max_table_entries = 4'000'000);
};

// f_lambda as the deletion-pattern series; 1 by convention at lambda in {0,1}
double f_lambda(const DeletionInstance& inst, double lam);

// max over lambda in (0,1) of -log f_lambda, by ternary search (the
// objective is concave); requires x != x_tilde
double rho_pair(const DeletionInstance& inst);

struct RhoBoundReport {
    int n = 0;
    double delta = 0.0;
    std::optional<double> rho_exact;
    double bound_naive = 0.0;        // -n log delta
    double bound_alternating = 0.0;  // exact value of the alternating pair
    double bound_fractional = 0.0;   // fractional-moment bound
    std::optional<std::pair<std::string, std::string>> argmin_pair;
};

struct PairTrace {
    std::string x, x_tilde;
    double rho = 0.0;
};

struct RhoOptions {
    int max_n = 8;  // pair search cost grows as 4^n
    int threads = 0;
    std::size_t max_table_entries = 4'000'000;
};

// Minimizes rho_pair over unordered pairs of distinct strings; the orbit
// under global complementation and reversal is searched once. Fills all
// three bounds and the argmin pair; optionally records one trace row per
// canonical pair.
RhoBoundReport rho_n_exact(int n, double delta, const RhoOptions& opt = {},
                           std::vector<PairTrace>* trace = nullptr);

// max over lambda of lambda log n - log E[L^lambda], L ~ Bin(n, delta)
double bound_fractional(std::int64_t n, double delta);

// exact rho_pair of the alternating pair 0101... / 1010...; n even
double bound_alternating(int n, double delta, std::size_t max_table_entries = 4'000'000);

}  // namespace mvc
