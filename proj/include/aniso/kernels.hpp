#pragma once

#include <string>
#include <vector>

#include "aniso/dilation.hpp"
#include "aniso/field.hpp"

namespace aniso {

/// Which multiplier gets synthesized. Families and their spatial decay orders:
///   poisson   e^{-2 pi rho(xi)}                    -> (1+rho)^{-gamma-1}
///   q         -2 pi rho(xi) e^{-2 pi rho(xi)}      -> (1+rho)^{-gamma-1}
///   deriv     xi_k e^{-2 pi rho(xi)}               -> (1+rho)^{-gamma-1-a_k}
///   deriv_rho xi_k rho(xi) e^{-2 pi rho(xi)}       -> (1+rho)^{-gamma-1-a_k}
///   deriv2    xi_k xi_l e^{-2 pi rho(xi)}          -> (1+rho)^{-gamma-1-a_k-a_l}
///   rho_tilde (2 pi rho)^{-alpha} PhiTilde(2^m rho) -> rho^{alpha-gamma}
///   riesz     (2 pi rho)^{-alpha} (dyadic window)   -> rho^{alpha-gamma}
enum class KernelFamily { poisson, q, deriv, deriv_rho, deriv2, rho_tilde, riesz };

struct KernelKind {
    KernelFamily family = KernelFamily::poisson;
    std::size_t k = 0, l = 0; // axes for derivative kernels
    int m = 0;                // dyadic index for rho_tilde
    double alpha = 0.0;       // order for rho_tilde / riesz

    static KernelKind poisson() { return {}; }
    static KernelKind q_kernel() { return {KernelFamily::q, 0, 0, 0, 0.0}; }
    static KernelKind deriv(std::size_t k) { return {KernelFamily::deriv, k, 0, 0, 0.0}; }
    static KernelKind deriv_rho(std::size_t k) {
        return {KernelFamily::deriv_rho, k, 0, 0, 0.0};
    }
    static KernelKind deriv2(std::size_t k, std::size_t l) {
        return {KernelFamily::deriv2, k, l, 0, 0.0};
    }
    static KernelKind rho_tilde(int m, double alpha) {
        return {KernelFamily::rho_tilde, 0, 0, m, alpha};
    }
    static KernelKind riesz(double alpha) {
        return {KernelFamily::riesz, 0, 0, 0, alpha};
    }
};

std::string kernel_kind_name(const KernelKind& kind);

/// Synthesized kernel with the decay claim attached. weight_shifted selects
/// the profile weight: (1 + rho)^e for the e^{-2 pi rho} family, rho^e for
/// the dyadic Riesz pieces.
struct KernelField {
    SampledField field;
    DilationGroup group;
    KernelKind kind;
    double decay_exponent = 0.0;
    bool weight_shifted = true;
};

/// Dense spectral synthesis of the named multiplier on the dual lattice.
/// For the e^{-2 pi rho} family the grid must satisfy
/// e^{-2 pi rho(xi)} < 1e-12 on the dual-box boundary.
KernelField synthesize_kernel(const KernelKind& kind, const DilationGroup& group,
                              const GridSpec& grid);
/// Same, reusing a precomputed rho_dual_table for the grid.
KernelField synthesize_kernel(const KernelKind& kind, const DilationGroup& group,
                              const GridSpec& grid,
                              const std::vector<double>& rho_dual);

/// rho_tilde_m = IFT[(2 pi rho)^{-alpha} PhiTilde(2^m rho)], PhiTilde a smooth
/// plateau equal to 1 on [1/2, 2], supported in [1/4, 4].
KernelField synthesize_rho_tilde(int m, double alpha, const DilationGroup& group,
                                 const GridSpec& grid);

/// Homogeneous Riesz kernel as the sum of all dyadic pieces resolvable on the
/// grid: multiplier (2 pi rho)^{-alpha} times a telescoped dyadic window.
KernelField synthesize_riesz_kernel(double alpha, const DilationGroup& group,
                                    const GridSpec& grid);

/// Smooth plateau: 1 on [1/2, 2], support [1/4, 4].
double plateau_window(double r);

/// Per-dyadic-shell sup of |kernel| * weight(rho); shells [2^k, 2^{k+1})
/// cover the box up to the largest rho-ball that fits inside it.
struct DecayProfile {
    std::vector<double> shell_lo;
    std::vector<double> shell_hi;
    std::vector<double> sup_weighted;
};

/// rho_cap = 0 profiles the whole inscribed ball; pass a smaller cap to
/// restrict to a wraparound-certified interior range.
DecayProfile decay_profile(const KernelField& kernel, double rho_cap = 0.0);
/// Same, reusing a precomputed rho_cell_table for the grid.
DecayProfile decay_profile(const KernelField& kernel,
                           const std::vector<double>& rho_cell, double rho_cap);

void write_profile_csv(const DecayProfile& profile, const std::string& path);

/// Largest R such that {rho <= R} fits inside the centered box:
/// min_j (L_j/2)^{1/a_j}.
double inscribed_rho_radius(const GridSpec& grid, const DilationGroup& group);

} // namespace aniso
