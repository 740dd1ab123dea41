#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optbench/model.hpp"

namespace optbench {

// Binary sequence with entries in {-1, +1}.
struct SpinSequence {
    std::vector<int8_t> s;

    int n() const { return static_cast<int>(s.size()); }
    void validate() const;
};

// Run lengths of a spin sequence, first run positive.
using RunLengthCode = std::vector<int>;

// Sum over all shifts j of the squared aperiodic autocorrelation.
long long energy(const SpinSequence& seq);

SpinSequence decode_runlength(const RunLengthCode& code);
RunLengthCode encode_runlength(const SpinSequence& seq);

// "1123" style strings; digits 1-9 only. Lists like "11 2 3" or "11,2,3"
// are parsed as whitespace/comma separated integers.
RunLengthCode parse_runlength(const std::string& text);
std::string format_runlength(const RunLengthCode& code);

// Best published sidelobe energies for 2 <= n <= 41.
std::optional<long long> known_labs_optimum(int n);

struct LabsResult {
    long long energy = 0;
    SpinSequence sequence;
    unsigned long long evaluations = 0;
};

// Exact minimum by enumeration with the first two spins pinned to +1
// (global flip and alternating flip leave the energy unchanged).
// Ties resolve to the sequence whose +1-first bit pattern is smallest.
// n must be in [2, 28].
LabsResult labs_exhaustive(int n);

// Degree <= 4 polynomial over binary x with s_i = 1 - 2 x_i.
Hubo labs_hubo(int n);

std::string write_sequence(const SpinSequence& seq);
SpinSequence parse_sequence(const std::string& text);

}  // namespace optbench
