#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rydfloq {

using Config = std::uint32_t;

enum class Boundary { periodic, open };

std::string to_string(Boundary bc);
Boundary boundary_from_string(const std::string& s);

// Raised by index lookups for configurations outside the basis.
class NotFound : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

constexpr int max_sites = 30;

bool is_legal(Config bits, int L, Boundary bc);

// Blockade-legal configurations, ascending by bitmask. Bit i set means site i
// is in the Rydberg state.
class ConstrainedBasis {
public:
    ConstrainedBasis(int L, Boundary bc);

    int sites() const { return L_; }
    Boundary boundary() const { return bc_; }
    std::size_t dim() const { return states_.size(); }
    const std::vector<Config>& states() const { return states_; }
    Config state(std::size_t i) const { return states_[i]; }
    std::size_t index_of(Config bits) const;
    bool contains(Config bits) const;
    std::string tag() const;

    // Neighbour of site i, or -1 past an open edge.
    int neighbor(int i, int offset) const;

private:
    int L_;
    Boundary bc_;
    std::vector<Config> states_;
};

ConstrainedBasis enumerate_basis(int L, Boundary bc);

// Neel configurations; Z2 carries an excitation on site 0.
Config neel_z2(int L);
Config neel_z2_prime(int L);

}  // namespace rydfloq
