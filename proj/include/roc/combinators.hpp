/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "roc/modulus.hpp"
#include "roc/name.hpp"

namespace roc {

/// Interleaving name for the sum: h(2n) = f(n), h(2n+1) = g(n).  When both
/// inputs carry escape bounds, the result carries the derived bound
/// E_h(n) = 2 * max(E_f(n), E_g(n)) + 1.
Name sum_name(Name f, Name g);

/// t(n) = max(r(n+1), s(n+1)) for the u-series of the interleaved name.
ModulusCertificate sum_modulus(const ModulusCertificate& r, const ModulusCertificate& s);

/// Cauchy-product name: enumerates f(k) + g(l-k) along diagonals l = 0, 1,
/// ... with k ascending inside each diagonal.  The derived escape bound
/// counts all cells of diagonals below E_f(n) + E_g(n): a cell value <= n
/// forces both split parts <= n, hence a diagonal below that sum.
Name product_name(Name f, Name g);

/// t(n) = 2 * max(r(n+c+2), s(n+c+2)), where r, s certify the sorted series
/// of the factors and 2^c bounds both factor values (caller-certified).
///
/// The index counts diagonals: the sum over all cells in diagonals >= t(n)
/// is at most 2^-n.  A flat sorted-series modulus follows by taking the cell
/// count of the first t(n) diagonals; see product_modulus_sorted.
ModulusCertificate product_modulus(const ModulusCertificate& r, const ModulusCertificate& s,
                                   Nat c);

/// Sorted-series modulus for the product: the cell count t(n)(t(n)+1)/2 of
/// the diagonals certified by product_modulus.  Valid for the sorted
/// rearrangement because the sorted tail at an index never exceeds the tail
/// of any rearrangement at the same index.
ModulusCertificate product_modulus_sorted(const ModulusCertificate& r,
                                          const ModulusCertificate& s, Nat c);

}  // namespace roc
