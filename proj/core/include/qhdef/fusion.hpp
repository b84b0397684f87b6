#pragma once

#include "qhdef/spaces.hpp"

namespace qhdef {

/// Product of two structured spaces of the same flavor (block 2-form,
/// concatenated factors, moments and charts). Pairing rescales must agree.
StructuredSpace product_space(const StructuredSpace& s1, const StructuredSpace& s2);

/// Internal fusion of a quasi-Hamiltonian space on factors (i, j), which must
/// act through the same group model: the two factors merge into one diagonal
/// factor, the moment becomes mu_i * mu_j, and the 2-form picks up
///   1/2 <mu_i^* theta^L wedge mu_j^* theta^R>
/// evaluated with the space's (rescaled) pairing.
StructuredSpace internal_fuse_qh(const StructuredSpace& s, int i, int j);

/// Internal fusion of a Hamiltonian space: sigma unchanged, moments summed on
/// the merged diagonal factor.
StructuredSpace internal_fuse_ham(const StructuredSpace& s, int i, int j);

/// Fusion product s1 (*) s2: product space, then internal fusion of factor i
/// of s1 with factor j of s2. Flavors must match.
StructuredSpace external_fuse(const StructuredSpace& s1, const StructuredSpace& s2,
                              int i = 0, int j = 0);

/// Moduli space of flat G-connections on a genus-g surface with r+1 boundary
/// components, as the iterated fusion (left to right)
///   D(G) (*) ... (*) D(G) (*) DD(G) (*) ... (*) DD(G)
/// with r doubles and g internally fused doubles DD(G); a G^{r+1}-space of
/// chart dimension 2(r+g) dim G. base_seed != 0 samples the alpha base points
/// of the constituent doubles; (g, r) = (0, 0) degenerates to a point space.
StructuredSpace moduli_qh(GroupModelPtr model, int genus, int boundaries,
                          std::uint64_t base_seed = 0);

/// Additive counterpart: iterated fusion of T*G and of T*G with the diagonal
/// action, a Hamiltonian G^{r+1}-space.
StructuredSpace moduli_ham(GroupModelPtr model, int genus, int boundaries,
                           std::uint64_t base_seed = 0);

}  // namespace qhdef
