#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vweb/web.hpp"

namespace vweb {

// Deterministic curve generators.  Each one attaches a manifest recording
// its provenance and the expected integrability locus, and every returned
// curve satisfies the coframe requirement at its basepoint.

// Constant closed coefficient forms dx_(i,j) on k(n+1) variables; locus
// is the whole parameter line and the chart coordinates are the first
// integrals of every member.
VeroneseCurve gen_flat(unsigned k, unsigned n);

// Replaces the pencils by scale * pencils for a k x k polynomial matrix
// invertible at the basepoint.  Members and locus are unchanged.
VeroneseCurve gen_rescaled(const VeroneseCurve& base, std::vector<std::vector<Poly>> scale,
                           std::uint64_t seed);

// Pullback under the substitution x_i -> images[i] = x_i + q_i(x_{>i}).
// Triangular maps have polynomial inverses, so integrability and the
// locus transfer exactly; the inverse map is recorded in the manifest.
VeroneseCurve gen_pullback(const VeroneseCurve& base, std::vector<Poly> images,
                           std::uint64_t seed);

// Parameter substitution (s, t) -> (a s + b t, c s + d t): the member at
// q becomes the member at g(q), so the locus is pulled back through g.
VeroneseCurve gen_moebius(const VeroneseCurve& base, const Moebius& g, std::uint64_t seed);

// Adds p(s, t) * beta to the chosen pencil, where p is the degree-n form
// s^(n - r) (t - a_1 s) ... (t - a_r s) over the given finite points.
// The exact locus is recomputed, never assumed; when the perturbation
// changes nothing the manifest carries the absorbed flag.
VeroneseCurve gen_perturbed(const VeroneseCurve& base, const std::vector<ProjPoint>& roots,
                            unsigned pencil, const DForm& beta, std::uint64_t seed);

// Validates a generated curve against its own manifest: coframe at the
// basepoint, pointwise checks at every declared locus point (or the full
// check for an everywhere-integrable declaration), failure just outside
// the declared locus, and the point-count bound |locus| < n + 3 for
// curves that are not integrable everywhere.  Throws on any violation.
void check_ground_truth(const VeroneseCurve& c);

// The standard battery: 18 curves for every shape (k, n) in {1,2}x{1,2,3}
// (flat, rescaled, pullbacks, parameter substitutions, perturbations and
// stacked transforms), each validated by check_ground_truth.  The master
// seed fully determines every curve.
std::vector<VeroneseCurve> standard_corpus(std::uint64_t seed);

struct CorpusEntry {
    std::string name;
    std::string family;
    unsigned k = 0;
    unsigned n = 0;
    std::uint64_t seed = 0;
    std::string curve_file;
    std::string manifest_file;
    std::string curve_hash;
    std::string manifest_hash;
};

// Writes one curve file and one manifest file per instance plus an index
// of specs and content hashes; returns the index entries in order.
std::vector<CorpusEntry> write_corpus(const std::filesystem::path& dir,
                                      const std::vector<VeroneseCurve>& curves);

} // namespace vweb
