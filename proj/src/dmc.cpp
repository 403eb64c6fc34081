#include "mvc/dmc.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mvc/errors.hpp"
#include "mvc/kernels.hpp"

namespace mvc {

namespace {

constexpr double kBimsTol = 1e-12;

std::optional<std::vector<int>> find_involution(const Dmc& c) {
    const int B = c.output_size();
    std::vector<int> pi(static_cast<std::size_t>(B), -1);
    for (int y = 0; y < B; ++y) {
        if (pi[static_cast<std::size_t>(y)] >= 0) continue;
        // fixed point first, then the first unmatched swap partner
        if (std::abs(c.w(0, y) - c.w(1, y)) <= kBimsTol) {
            pi[static_cast<std::size_t>(y)] = y;
            continue;
        }
        bool found = false;
        for (int z = y + 1; z < B && !found; ++z) {
            if (pi[static_cast<std::size_t>(z)] >= 0) continue;
            if (std::abs(c.w(1, z) - c.w(0, y)) <= kBimsTol &&
                std::abs(c.w(0, z) - c.w(1, y)) <= kBimsTol) {
                pi[static_cast<std::size_t>(y)] = z;
                pi[static_cast<std::size_t>(z)] = y;
                found = true;
            }
        }
        if (!found) return std::nullopt;
    }
    // full verification of the matching
    for (int y = 0; y < B; ++y) {
        const int z = pi[static_cast<std::size_t>(y)];
        if (pi[static_cast<std::size_t>(z)] != y) return std::nullopt;
        if (std::abs(c.w(0, y) - c.w(1, z)) > kBimsTol) return std::nullopt;
    }
    return pi;
}

}  // namespace

Dmc Dmc::from_rows(std::vector<FiniteDistribution> rows) {
    if (rows.empty()) throw InvalidInput("channel: no rows");
    const int B = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != B) throw InvalidInput("channel: inconsistent row lengths");
    Dmc c;
    c.rows_ = std::move(rows);
    c.output_size_ = B;
    if (c.input_size() == 2) c.bims_ = find_involution(c);
    return c;
}

Dmc Dmc::bsc(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("bsc: p outside [0,1]");
    return from_rows({FiniteDistribution::from_probs({1.0 - p, p}),
                      FiniteDistribution::from_probs({p, 1.0 - p})});
}

Dmc Dmc::bec(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidInput("bec: erasure probability outside [0,1]");
    return from_rows({FiniteDistribution::from_probs({1.0 - eps, 0.0, eps}),
                      FiniteDistribution::from_probs({0.0, 1.0 - eps, eps})});
}

Dmc Dmc::zchan(double delta) {
    if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidInput("zchan: delta outside [0,1]");
    return from_rows({FiniteDistribution::from_probs({1.0, 0.0}),
                      FiniteDistribution::from_probs({delta, 1.0 - delta})});
}

std::optional<std::vector<int>> detect_bims(const Dmc& channel) {
    if (channel.input_size() != 2)
        throw InvalidInput("detect_bims: channel must have binary input");
    return find_involution(channel);
}

double z_general(const Dmc& channel, const FiniteDistribution& input) {
    if (input.size() != channel.input_size())
        throw InvalidInput("z_general: input distribution size mismatch");
    kern::Accumulator acc;
    for (int x = 0; x < channel.input_size(); ++x) {
        for (int xt = 0; xt < channel.input_size(); ++xt) {
            if (x == xt) continue;
            const double w = std::sqrt(input.prob(x) * input.prob(xt));
            if (w == 0.0) continue;
            acc.add(w * kern::sqrt_dot(channel.row(x).probs(), channel.row(xt).probs()));
        }
    }
    return acc.value();
}

double bhattacharyya_binary(const Dmc& channel) {
    if (channel.input_size() != 2)
        throw InvalidInput("bhattacharyya_binary: channel must have binary input");
    return bhattacharyya(channel.row(0), channel.row(1));
}

Dmc product_channel(const Dmc& channel, int n, std::size_t max_cells) {
    if (n < 1) throw InvalidInput("product_channel: n must be positive");
    const double cells = std::pow(channel.input_size(), n) * std::pow(channel.output_size(), n);
    if (!(cells <= static_cast<double>(max_cells)))
        throw BudgetExceeded("product_channel: |X|^n * |Y|^n exceeds the cell budget");

    std::vector<std::vector<double>> rows{{1.0}};
    for (int step = 0; step < n; ++step) {
        std::vector<std::vector<double>> next;
        next.reserve(rows.size() * static_cast<std::size_t>(channel.input_size()));
        for (const auto& r : rows) {
            for (int x = 0; x < channel.input_size(); ++x) {
                std::vector<double> nr;
                nr.reserve(r.size() * static_cast<std::size_t>(channel.output_size()));
                for (double v : r)
                    for (int y = 0; y < channel.output_size(); ++y)
                        nr.push_back(v * channel.w(x, y));
                next.push_back(std::move(nr));
            }
        }
        rows = std::move(next);
    }
    std::vector<FiniteDistribution> out;
    out.reserve(rows.size());
    for (auto& r : rows) out.push_back(FiniteDistribution::from_probs(std::move(r)));
    return Dmc::from_rows(std::move(out));
}

Dmc dview_channel(const Dmc& channel, int d, std::size_t max_cells) {
    if (d < 1) throw InvalidInput("dview_channel: d must be positive");
    const double cells = channel.input_size() * std::pow(channel.output_size(), d);
    if (!(cells <= static_cast<double>(max_cells)))
        throw BudgetExceeded("dview_channel: |X| * |Y|^d exceeds the cell budget");

    std::vector<FiniteDistribution> out;
    for (int x = 0; x < channel.input_size(); ++x) {
        std::vector<double> r{1.0};
        for (int step = 0; step < d; ++step) {
            std::vector<double> nr;
            nr.reserve(r.size() * static_cast<std::size_t>(channel.output_size()));
            for (double v : r)
                for (int y = 0; y < channel.output_size(); ++y)
                    nr.push_back(v * channel.w(x, y));
            r = std::move(nr);
        }
        out.push_back(FiniteDistribution::from_probs(std::move(r)));
    }
    return Dmc::from_rows(std::move(out));
}

MinPairChernoff min_pair_chernoff(const Dmc& channel, const FiniteDistribution* input) {
    if (input && input->size() != channel.input_size())
        throw InvalidInput("min_pair_chernoff: input distribution size mismatch");
    MinPairChernoff best{kPosInf, -1, -1};
    for (int x = 0; x < channel.input_size(); ++x) {
        if (input && input->prob(x) <= 0.0) continue;
        for (int xt = 0; xt < channel.input_size(); ++xt) {
            if (xt == x) continue;
            if (input && input->prob(xt) <= 0.0) continue;
            const double c = chernoff_information(channel.row(x), channel.row(xt));
            if (c < best.value) best = {c, x, xt};
        }
    }
    if (best.x < 0) throw InvalidInput("min_pair_chernoff: fewer than two inputs in support");
    return best;
}

Dmc parse_channel_text(std::istream& in) {
    int nx = 0, ny = 0;
    if (!(in >> nx >> ny)) throw InvalidInput("channel file: missing '|X| |Y|' header line");
    if (nx < 1 || ny < 1) throw InvalidInput("channel file: alphabet sizes must be positive");
    std::vector<FiniteDistribution> rows;
    rows.reserve(static_cast<std::size_t>(nx));
    for (int x = 0; x < nx; ++x) {
        std::vector<double> r(static_cast<std::size_t>(ny));
        kern::Accumulator sum;
        for (int y = 0; y < ny; ++y) {
            if (!(in >> r[static_cast<std::size_t>(y)]))
                throw InvalidInput("channel file: truncated row " + std::to_string(x));
            if (!(r[static_cast<std::size_t>(y)] >= 0.0))
                throw InvalidInput("channel file: negative probability in row " + std::to_string(x));
            sum.add(r[static_cast<std::size_t>(y)]);
        }
        if (std::abs(sum.value() - 1.0) > 1e-9)
            throw InvalidInput("channel file: row " + std::to_string(x) +
                               " does not sum to 1 within 1e-9");
        // renormalize so downstream invariants hold exactly
        for (double& v : r) v /= sum.value();
        rows.push_back(FiniteDistribution::from_probs(std::move(r)));
    }
    return Dmc::from_rows(std::move(rows));
}

Dmc load_channel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("channel file: cannot open '" + path + "'");
    return parse_channel_text(in);
}

void write_channel_text(std::ostream& out, const Dmc& channel) {
    out << channel.input_size() << ' ' << channel.output_size() << '\n';
    char buf[64];
    for (int x = 0; x < channel.input_size(); ++x) {
        for (int y = 0; y < channel.output_size(); ++y) {
            std::snprintf(buf, sizeof buf, "%.17g", channel.w(x, y));
            out << (y ? " " : "") << buf;
        }
        out << '\n';
    }
}

Dmc parse_channel_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw InvalidInput("channel spec: expected 'bsc:p', 'bec:e', 'zchan:d' or 'file:path'");
    const std::string kind = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    if (kind == "file") return load_channel_file(arg);
    double v = 0.0;
    try {
        std::size_t pos = 0;
        v = std::stod(arg, &pos);
        if (pos != arg.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw InvalidInput("channel spec: bad parameter '" + arg + "'");
    }
    if (kind == "bsc") return Dmc::bsc(v);
    if (kind == "bec") return Dmc::bec(v);
    if (kind == "zchan") return Dmc::zchan(v);
    throw InvalidInput("channel spec: unknown kind '" + kind + "'");
}

}  // namespace mvc
