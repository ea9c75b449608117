#pragma once

#include <memory>
#include <vector>

namespace rotorqec {

/// Truncated |J,m> (x) Fock product basis. Rotor states are enumerated
/// J = 0..j_max, m = -J..J (rotor index J^2 + J + m), followed by the
/// mixed-radix motional occupation with mode 0 outermost. A fock cutoff of
/// c means occupations n = 0..c (c+1 levels).
class RotorBasis {
public:
    explicit RotorBasis(int j_max, std::vector<int> fock_cutoffs = {});

    int j_max() const { return j_max_; }
    const std::vector<int>& fock_cutoffs() const { return fock_cutoffs_; }
    int n_modes() const { return static_cast<int>(fock_cutoffs_.size()); }

    int rotor_dim() const { return rotor_dim_; }
    int mode_dim() const { return mode_dim_; }
    int dim() const { return rotor_dim_ * mode_dim_; }

    bool contains(int J, int m) const { return J >= 0 && J <= j_max_ && std::abs(m) <= J; }

    int rotor_index(int J, int m) const;
    int mode_index(const std::vector<int>& ns) const;
    int index(int J, int m, const std::vector<int>& ns = {}) const;
    int index_parts(int rotor_idx, int mode_idx) const { return rotor_idx * mode_dim_ + mode_idx; }

    struct Label {
        int J = 0;
        int m = 0;
        std::vector<int> ns;
    };
    Label label(int idx) const;

    /// Occupation of mode k in the packed motional index.
    int mode_occupation(int mode_idx, int k) const;

    bool operator==(const RotorBasis& other) const {
        return j_max_ == other.j_max_ && fock_cutoffs_ == other.fock_cutoffs_;
    }

private:
    int j_max_;
    std::vector<int> fock_cutoffs_;
    std::vector<int> strides_;
    int rotor_dim_;
    int mode_dim_;
};

using BasisPtr = std::shared_ptr<const RotorBasis>;

inline BasisPtr make_basis(int j_max, std::vector<int> fock_cutoffs = {}) {
    return std::make_shared<const RotorBasis>(j_max, std::move(fock_cutoffs));
}

}  // namespace rotorqec
