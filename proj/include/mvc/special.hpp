#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "mvc/dmc.hpp"
#include "mvc/prob.hpp"

// Closed-form capacities of the binomial channel and its Poisson
// approximation, the sandwich between them, and BIMS-to-BSC decomposition
// bounds. All capacities are in nats; the "log 2" leading constants are one
// bit expressed in nats.
namespace mvc {

struct BinomialChannelSpec {
    std::int64_t d = 1;  // views
    double p = 0.0;      // crossover
};

struct PoissonChannelSpec {
    double d = 1.0;           // Poisson intensity scale
    double p = 0.0;           // crossover
    double tail_tol = 1e-10;  // truncation mass, in (0, 1e-6]
};

// Z(p) = 2 sqrt(p(1-p)), the BSC Bhattacharyya parameter
double bsc_bhattacharyya(double p);

// exp(-d(1-Z(p))) - Z(p)^(2d), the sandwich width
double binomial_poisson_gap_bound(double d, double p);

// capacity of Bin_d(p) in nats; exact log-domain evaluation, symmetric in
// p <-> 1-p, in [0, log 2]
double binomial_capacity(const BinomialChannelSpec& spec);
double binomial_capacity_n(std::int64_t n, double p);  // n >= 0; n = 0 gives 0

struct PoissonCapacityResult {
    double value = 0.0;             // nats
    double truncation_bound = 0.0;  // certified bound on the neglected mass' contribution
    std::int64_t k1 = 0, k2 = 0;    // truncation points of the two output indices
};

PoissonCapacityResult poisson_capacity_detail(const PoissonChannelSpec& spec);
double poisson_capacity(const PoissonChannelSpec& spec);

// |C(Poi_d(p)) - E_{N~Poi(d)} C(Bin_N(p))| with both sides truncated by the
// same tail rule; bounded by 2 * tail_tol * log 2
double poisson_mixture_identity_check(const PoissonChannelSpec& spec);

struct SweepRow {
    int d;
    double p;
    double c_bin;
    double c_poi;
    double gap;
    double thm3_bound;
};

// Rows in (d, p) grid order; rows are independent and evaluated by a small
// worker pool (threads = 0 picks the core count), with results placed by
// index so the output does not depend on scheduling.
std::vector<SweepRow> figure1_sweep(const std::vector<int>& d_values,
                                    const std::vector<double>& p_grid, int threads = 0);

// CSV with header d,p,c_bin_nats,c_poi_nats,gap,thm3_bound; 12 significant
// digits, byte-identical across runs
void write_figure1_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// One BSC subchannel of a BIMS channel: the orbit {y, pi(y)} of the output
// involution, its selection probability and crossover.
struct BimsSubchannel {
    int y = 0, y_paired = 0;   // y == y_paired marks a fixed point
    double weight = 0.0;       // epsilon_i
    double crossover = 0.5;    // p_i in [0, 1/2]
    bool flipped = false;      // true when input 0 favors y_paired over y
};

struct BimsDecomposition {
    FiniteDistribution weights;      // over subchannels
    std::vector<double> crossovers;  // aligned with weights
    std::vector<BimsSubchannel> subchannels;
    int output_size = 0;

    // rebuilds the two channel rows from the subchannels
    std::vector<std::vector<double>> reconstruct_rows() const;
};

// Splits a detected-BIMS channel into BSC subchannels along the involution
// orbits. Throws InvalidInput when the channel is not BIMS.
BimsDecomposition bims_decompose(const Dmc& channel);

// C(Poi_d(p_max)) <= C^(d)(W) <= C(Poi_d(p_min)) + binomial_poisson_gap_bound(d, p_min).
// Requires every crossover in (0, 1/2); degenerate crossovers are an error.
std::pair<double, double> bims_capacity_bounds(const BimsDecomposition& decomp, int d,
                                               double tail_tol = 1e-10);

}  // namespace mvc
