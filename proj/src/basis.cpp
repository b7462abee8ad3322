#include "rydfloq/basis.hpp"

#include <algorithm>

namespace rydfloq {

std::string to_string(Boundary bc) { return bc == Boundary::periodic ? "periodic" : "open"; }

Boundary boundary_from_string(const std::string& s)
{
    if (s == "periodic" || s == "pbc") return Boundary::periodic;
    if (s == "open" || s == "obc") return Boundary::open;
    throw std::invalid_argument("unknown boundary condition '" + s + "'");
}

bool is_legal(Config bits, int L, Boundary bc)
{
    if (L < 2) throw std::invalid_argument("chain needs at least 2 sites");
    if (L < 32 && (bits >> L) != 0) return false;
    const Config mask = L >= 32 ? ~Config{0} : ((Config{1} << L) - 1);
    if ((bits & (bits >> 1)) & mask) return false;
    if (bc == Boundary::periodic && (bits & 1u) && ((bits >> (L - 1)) & 1u)) return false;
    return true;
}

namespace {

// Depth-first generation keeps the cost proportional to the basis size.
void grow(int i, int L, Boundary bc, Config bits, bool prev, std::vector<Config>& out)
{
    if (i == L) {
        if (bc == Boundary::open || !((bits & 1u) && prev)) out.push_back(bits);
        return;
    }
    grow(i + 1, L, bc, bits, false, out);
    if (!prev) grow(i + 1, L, bc, bits | (Config{1} << i), true, out);
}

}  // namespace

ConstrainedBasis::ConstrainedBasis(int L, Boundary bc) : L_(L), bc_(bc)
{
    if (L < 2 || L > max_sites)
        throw std::invalid_argument("L=" + std::to_string(L) + " outside [2, " +
                                    std::to_string(max_sites) + "]");
    grow(0, L, bc, 0, false, states_);
    std::sort(states_.begin(), states_.end());
}

std::size_t ConstrainedBasis::index_of(Config bits) const
{
    auto it = std::lower_bound(states_.begin(), states_.end(), bits);
    if (it == states_.end() || *it != bits)
        throw NotFound("configuration " + std::to_string(bits) + " not in basis " + tag());
    return static_cast<std::size_t>(it - states_.begin());
}

bool ConstrainedBasis::contains(Config bits) const
{
    return std::binary_search(states_.begin(), states_.end(), bits);
}

std::string ConstrainedBasis::tag() const { return "L" + std::to_string(L_) + "-" + to_string(bc_); }

int ConstrainedBasis::neighbor(int i, int offset) const
{
    int j = i + offset;
    if (bc_ == Boundary::periodic) return ((j % L_) + L_) % L_;
    return (j < 0 || j >= L_) ? -1 : j;
}

ConstrainedBasis enumerate_basis(int L, Boundary bc) { return ConstrainedBasis(L, bc); }

Config neel_z2(int L)
{
    Config c = 0;
    for (int i = 0; i < L; i += 2) c |= Config{1} << i;
    return c;
}

Config neel_z2_prime(int L)
{
    Config c = 0;
    for (int i = 1; i < L; i += 2) c |= Config{1} << i;
    return c;
}

}  // namespace rydfloq
