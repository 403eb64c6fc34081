#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mvc/prob.hpp"

namespace mvc {

// Discrete memoryless channel W(y|x) over finite alphabets, stored as one
// FiniteDistribution per input. Binary-input channels are probed for an
// output involution pi with W(y|0) = W(pi(y)|1) at construction; when one
// exists the channel is BIMS and the involution is kept as metadata.
class Dmc {
  public:
    static Dmc from_rows(std::vector<FiniteDistribution> rows);
    static Dmc bsc(double p);
    static Dmc bec(double eps);    // outputs ordered 0, 1, erasure
    static Dmc zchan(double delta);

    int input_size() const { return static_cast<int>(rows_.size()); }
    int output_size() const { return output_size_; }
    const FiniteDistribution& row(int x) const { return rows_[static_cast<std::size_t>(x)]; }
    double w(int x, int y) const { return row(x).prob(y); }
    double log_w(int x, int y) const { return row(x).log_prob(y); }
    const std::optional<std::vector<int>>& bims_involution() const { return bims_; }

  private:
    std::vector<FiniteDistribution> rows_;
    int output_size_ = 0;
    std::optional<std::vector<int>> bims_;
};

// Searches for an output involution matching the two rows; requires a
// binary-input channel. Returns nullopt when none exists.
std::optional<std::vector<int>> detect_bims(const Dmc& channel);

// Z_g(W) = sum_{x != x'} sum_y sqrt(P(x) W(y|x) P(x') W(y|x')), the
// general-input analogue of the Bhattacharyya parameter
double z_general(const Dmc& channel, const FiniteDistribution& input);

// Bhattacharyya parameter of a binary-input channel, sum_y sqrt(W(y|0) W(y|1))
double bhattacharyya_binary(const Dmc& channel);

// n-letter memoryless extension: alphabets X^n / Y^n, rows are Kronecker
// products of the base rows. Throws BudgetExceeded when the row matrix
// would exceed max_cells entries.
Dmc product_channel(const Dmc& channel, int n, std::size_t max_cells = std::size_t{1} << 24);

// d-view channel as an explicit DMC: same inputs, outputs Y^d, row x is the
// d-fold Kronecker power of row x
Dmc dview_channel(const Dmc& channel, int d, std::size_t max_cells = std::size_t{1} << 24);

struct MinPairChernoff {
    double value;
    int x;
    int x_tilde;
};

// min over ordered pairs x != x' of C(W(.|x), W(.|x')); inputs with zero
// probability under `input` (when given) are excluded
MinPairChernoff min_pair_chernoff(const Dmc& channel,
                                  const FiniteDistribution* input = nullptr);

// Plain-text matrix format: first line "|X| |Y|", then |X| rows of |Y|
// decimal probabilities. Row sums are validated to 1e-9 and renormalized.
Dmc parse_channel_text(std::istream& in);
Dmc load_channel_file(const std::string& path);
void write_channel_text(std::ostream& out, const Dmc& channel);

// "bsc:p", "bec:e", "zchan:d" or "file:path"
Dmc parse_channel_spec(const std::string& spec);

}  // namespace mvc
