#pragma once

#include "paraunit/analysis.hpp"
#include "paraunit/matrix.hpp"
#include "paraunit/repr.hpp"

namespace paraunit {

/// One-state unitary realization of I + (phi_alpha(z) - 1) v v*:
/// A = alpha, B = s v*, C = s v, D = I - (1 + conj(alpha)) v v*,
/// s = sqrt(1 - |alpha|^2). Throws PoleNotInDisk.
StateSpaceRealization factor_realization(const Pole& alpha, const ComplexMatrix& v);

/// Series connection F2 * F1 (F1 acts first):
/// A = [[A2, B2 C1], [0, A1]], B = [B2 D1; B1], C = [C2, D2 C1], D = D2 D1.
StateSpaceRealization cascade(const StateSpaceRealization& f2, const StateSpaceRealization& f1);

/// Cascade of factor realizations with the constant attached on its side.
/// n equals the factor count. Throws ImproperFunction if any pole is at
/// infinity or outside the disk.
StateSpaceRealization bp_to_realization(const BlaschkePotapovForm& f);

/// Completes an isometric (p > m) or coisometric (m > p) realization matrix
/// to a unitary one by appending columns [B~; D~] or rows [C~ D~]. The input
/// blocks are kept verbatim. Square input is returned unchanged.
StateSpaceRealization allpass_embed(const StateSpaceRealization& ss, double tol = 1e-8);

/// U_iso from R = R_big diag(I_n, U_iso) (p >= m) or U_coiso from
/// R = diag(I_n, U_coiso) R_big (m > p).
ComplexMatrix extract_constant(const ComplexMatrix& r_big, const StateSpaceRealization& ss,
                               double tol = 1e-9);

struct SquareEmbedding {
  BlaschkePotapovForm square;  // same factors, identity constant
  ComplexMatrix constant;      // the input's constant
};

/// F = F_sq U_iso (Iso) or F = U_coiso F_sq (Coiso).
SquareEmbedding embed_to_square(const BlaschkePotapovForm& f);

/// Inverse of embed_to_square. The constant's shape picks the side: tall
/// multiplies on the right, wide on the left, square keeps the input side.
BlaschkePotapovForm truncate_to_rect(const BlaschkePotapovForm& square, const ComplexMatrix& constant);

/// Multiplies F by the scalar psi(z) = prod (z - alpha_j) / (1 - conj(alpha_j) z)
/// over poles at infinity or outside the disk (1/z for infinity). Each
/// offending factor is rewritten in place, so every output pole lies in
/// the open disk.
BlaschkePotapovForm flip_poles(const BlaschkePotapovForm& f);

/// The scalar psi(z) that flip_poles multiplies by.
Complex flip_multiplier(const BlaschkePotapovForm& f, Complex z);

/// Delta = chi_A(z) I and N = C adj(zI - A) B + D chi_A(z) by the
/// Leverrier-Faddeev recursion, both of degree n.
MFDForm ss_to_mfd(const StateSpaceRealization& ss, MfdSide side);

/// Expansion of a product whose poles are all 0 or infinity.
/// q = -(number of zero poles), gamma = factor count. Throws NotFIR.
LaurentPolyForm bp_to_laurent(const BlaschkePotapovForm& f);

}  // namespace paraunit
