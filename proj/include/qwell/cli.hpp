// cli.hpp
// Descriptor grammars and CSV emitters behind the qwell command-line tool.
// Emitters write to any std::ostream so they can be driven from tests.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/core.h>

#include "qwell/dynamics.hpp"
#include "qwell/entangled.hpp"
#include "qwell/inference.hpp"
#include "qwell/metrology.hpp"
#include "qwell/probe_states.hpp"
#include "qwell/well.hpp"

namespace qwell::cli {

// Bad user input; the tool maps it to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Locale-independent parse of the whole token.
inline double to_double(const std::string& token) {
    double v = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (token.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw UsageError(fmt::format("not a real number: '{}'", token));
    }
    return v;
}

inline long long to_integer(const std::string& token) {
    long long v = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (token.empty() || ec != std::errc() || ptr != end) {
        throw UsageError(fmt::format("not an integer: '{}'", token));
    }
    return v;
}

inline int to_int(const std::string& token) {
    const long long v = to_integer(token);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw UsageError(fmt::format("integer out of range: '{}'", token));
    }
    return static_cast<int>(v);
}

inline std::string num(double v) { return fmt::format("{:.12g}", v); }

}  // namespace detail

// Whitespace-separated real amplitudes, f_1 first.
inline std::vector<double> read_coefficients(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError(fmt::format("cannot open amplitude file '{}'", path));
    std::vector<double> out;
    std::string token;
    while (in >> token) out.push_back(detail::to_double(token));
    if (out.empty()) throw UsageError(fmt::format("amplitude file '{}' is empty", path));
    return out;
}

// eigen:<n> | super:<n>:<m>:<alpha> | poly:<p> | parabolic | custom:@<file>
inline ProbeState parse_state(const std::string& text) {
    const auto parts = detail::split(text, ':');
    const auto& kind = parts[0];
    auto expect = [&](std::size_t n) {
        if (parts.size() != n) throw UsageError(fmt::format("malformed state descriptor '{}'", text));
    };
    try {
        if (kind == "eigen") {
            expect(2);
            return ProbeState::eigen(detail::to_int(parts[1]));
        }
        if (kind == "super") {
            expect(4);
            return ProbeState::superposition(detail::to_int(parts[1]), detail::to_int(parts[2]),
                                             detail::to_double(parts[3]));
        }
        if (kind == "poly") {
            expect(2);
            return ProbeState::polynomial(detail::to_int(parts[1]));
        }
        if (kind == "parabolic") {
            expect(1);
            return ProbeState::parabolic();
        }
        if (kind == "custom") {
            const auto at = text.find(":@");
            if (at == std::string::npos || at + 2 >= text.size()) {
                throw UsageError(fmt::format("custom state needs custom:@<file>, got '{}'", text));
            }
            return ProbeState::custom(read_coefficients(text.substr(at + 2)));
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(fmt::format("invalid state '{}': {}", text, e.what()));
    }
    throw UsageError(fmt::format("unknown state kind '{}' in '{}'", kind, text));
}

// Comma list whose items are numbers or inclusive start:stop:count ranges.
inline std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : detail::split(text, ',')) {
        const auto fields = detail::split(item, ':');
        if (fields.size() == 1) {
            out.push_back(detail::to_double(fields[0]));
        } else if (fields.size() == 3) {
            const double start = detail::to_double(fields[0]);
            const double stop = detail::to_double(fields[1]);
            const long long count = detail::to_integer(fields[2]);
            if (count < 1) throw UsageError(fmt::format("range count must be >= 1 in '{}'", item));
            if (start > stop) throw UsageError(fmt::format("range start exceeds stop in '{}'", item));
            if (count == 1) {
                if (start != stop) throw UsageError(fmt::format("a one-point range needs start == stop in '{}'", item));
                out.push_back(start);
                continue;
            }
            // Each point from its index, so no step accumulates.
            for (long long k = 0; k < count; ++k) {
                out.push_back(k == count - 1 ? stop : start + (stop - start) * static_cast<double>(k) / (count - 1));
            }
        } else {
            throw UsageError(fmt::format("malformed value or range '{}'", item));
        }
    }
    return out;
}

// Comma list of integers.
inline std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    for (const auto& item : detail::split(text, ',')) out.push_back(detail::to_int(item));
    return out;
}

struct IndexRange {
    int lo;
    int hi;
};

// lo:hi, inclusive.
inline IndexRange parse_index_range(const std::string& text) {
    const auto fields = detail::split(text, ':');
    if (fields.size() != 2) throw UsageError(fmt::format("index range must be lo:hi, got '{}'", text));
    const IndexRange r{detail::to_int(fields[0]), detail::to_int(fields[1])};
    if (r.lo < 1 || r.hi <= r.lo) throw UsageError(fmt::format("index range needs 1 <= lo < hi, got '{}'", text));
    return r;
}

inline PairFamily parse_family(const std::string& text) {
    if (text == "eigen") return PairFamily::eigen;
    if (text == "poly") return PairFamily::polynomial;
    throw UsageError(fmt::format("unknown family '{}' (expected eigen or poly)", text));
}

inline void check_widths(const std::vector<double>& widths) {
    for (double a : widths) {
        if (!(a > 0.0)) throw UsageError(fmt::format("well width must be positive, got {}", a));
    }
}

// ---- emitters ---------------------------------------------------------------

inline void cmd_static(std::ostream& out, const std::vector<std::string>& state_specs,
                       const std::vector<double>& widths, int truncation) {
    check_widths(widths);
    std::vector<ProbeState> probes;
    for (const auto& s : state_specs) probes.push_back(parse_state(s));
    out << "state,a,qfi,fi_position,fi_energy,qsnr\n";
    for (std::size_t k = 0; k < probes.size(); ++k) {
        for (double a : widths) {
            const auto r = report(probes[k], WellConfig(a, truncation));
            out << state_specs[k] << ',' << detail::num(a) << ',' << detail::num(r.qfi) << ','
                << detail::num(r.fi_position) << ',' << detail::num(r.fi_energy) << ',' << detail::num(r.qsnr)
                << '\n';
        }
    }
}

// QSNR of the eigenstate family as a function of energy (a = 1): 1 + 8E/3.
inline double qsnr_eigen_at_energy(double energy) { return 1.0 + 8.0 * energy / 3.0; }

// QSNR of the polynomial family at the real order p whose mean energy is E.
// The family starts at E = 5 (p = 1); below that there is no member.
inline std::optional<double> qsnr_poly_at_energy(double energy) {
    if (energy < 5.0) return std::nullopt;
    const double b = 4.0 * energy - 6.0;
    const double disc = std::max(0.0, b * b - 32.0 * (1.0 + energy));
    const double p = (b + std::sqrt(disc)) / 16.0;
    return (1.0 + 4.0 * p) * (1.0 + 8.0 * p) / (4.0 * p - 1.0);
}

// Energies of the first `levels` eigenstates and polynomial states, merged.
inline std::vector<double> default_energy_axis(int levels) {
    std::vector<double> e;
    const WellConfig unit(1.0);
    for (int n = 1; n <= levels; ++n) {
        e.push_back(eigen_energy(n, unit));
        e.push_back(mean_energy(ProbeState::polynomial(n), unit));
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

inline void cmd_energy(std::ostream& out, const std::vector<double>& energies) {
    out << "energy,qsnr_eigen,qsnr_poly\n";
    for (double e : energies) {
        if (!(e > 0.0)) throw UsageError(fmt::format("energy must be positive, got {}", e));
        const auto poly = qsnr_poly_at_energy(e);
        out << detail::num(e) << ',' << detail::num(qsnr_eigen_at_energy(e)) << ','
            << (poly ? detail::num(*poly) : std::string()) << '\n';
    }
}

// Parabolic probe; residual compares truncation N against 2N.
inline void cmd_time(std::ostream& out, const std::vector<double>& widths, const std::vector<double>& times,
                     int truncation) {
    check_widths(widths);
    for (double t : times) {
        if (!(t >= 0.0)) throw UsageError(fmt::format("time must be >= 0, got {}", t));
    }
    out << "a,t,qsnr,residual\n";
    for (double a : widths) {
        const WellConfig cfg(a, truncation);
        for (double t : times) {
            const double q = a * a * qfi_parabolic_time(cfg, t);
            const double res = truncation_residual(cfg, t, truncation, 2 * truncation);
            out << detail::num(a) << ',' << detail::num(t) << ',' << detail::num(q) << ',' << detail::num(res) << '\n';
        }
    }
}

inline void cmd_entangled(std::ostream& out, PairFamily family, IndexRange range) {
    const char* kind = family == PairFamily::eigen ? "eigen" : "poly";
    auto single = [&](int k) { return family == PairFamily::eigen ? qsnr_eigen(k) : qsnr_polynomial(k); };
    out << "kind,i,j,q_joint,q_sum,gamma\n";
    for (int i = range.lo; i <= range.hi; ++i) {
        for (int j = range.lo; j <= range.hi; ++j) {
            const double q_sum = single(i) + single(j);
            if (i == j) {
                out << kind << ',' << i << ',' << j << ",," << detail::num(q_sum) << ",\n";
                continue;
            }
            const SymmetrizedPair pair(family, i, j);
            const double q = qsnr_two(pair);
            out << kind << ',' << i << ',' << j << ',' << detail::num(q) << ',' << detail::num(q_sum) << ','
                << detail::num(q / q_sum) << '\n';
        }
    }
}

inline void cmd_montecarlo(std::ostream& out, const std::string& state_spec, const std::vector<double>& widths,
                           const std::vector<int>& sizes, int replicas, std::uint64_t seed, int truncation) {
    check_widths(widths);
    for (int m : sizes) {
        if (m < 1) throw UsageError(fmt::format("sample size must be >= 1, got {}", m));
    }
    if (replicas < 2) throw UsageError(fmt::format("need at least 2 replicas, got {}", replicas));
    const auto state = parse_state(state_spec);
    out << "state,a,M,replicas,variance,crlb_ratio\n";
    for (double a : widths) {
        for (int m : sizes) {
            const auto r = crlb_experiment(state, WellConfig(a, truncation), m, replicas, seed);
            out << state_spec << ',' << detail::num(a) << ',' << m << ',' << replicas << ','
                << detail::num(r.variance) << ',' << detail::num(r.crlb_ratio) << '\n';
        }
    }
}

}  // namespace qwell::cli
