#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gibbsinf/subshift.hpp"

namespace gibbsinf {

/// Depth-k locally constant potential: A(x) depends only on (x_1, ..., x_k) and
/// is stored as a table over admissible k-words. Every depth-k function is
/// Lipschitz for the shift metric, so these stand in for Lipschitz potentials;
/// refinement in k is the approximation path.
class Potential {
  public:
    /// Builds from explicit (word, value) pairs. The pairs must cover exactly the
    /// admissible k-words; missing or extraneous words raise InputError naming them.
    Potential(SubshiftSpec spec, int depth, const std::vector<std::pair<Word, double>>& entries);

    static Potential constant(SubshiftSpec spec, int depth, double value);

    /// Internal/fast path: dense table of size q^depth indexed by word_rank,
    /// entries at inadmissible ranks are ignored.
    static Potential from_dense(SubshiftSpec spec, int depth, std::vector<double> dense);

    const SubshiftSpec& spec() const { return spec_; }
    int depth() const { return depth_; }

    /// A evaluated on the cylinder of w; uses the first `depth` symbols.
    double value(std::span<const std::uint8_t> w) const {
        std::uint64_t r = 0;
        for (int i = 0; i < depth_; ++i) r = r * q_ + w[static_cast<std::size_t>(i)];
        return dense_[r];
    }
    double value(const Word& w) const { return value(std::span<const std::uint8_t>(w)); }
    double value_at_rank(std::uint64_t rank) const { return dense_[rank]; }

    /// Largest |A(w) - B(w)| over admissible words of the common (max) depth.
    /// Both potentials must live on the same subshift.
    static double sup_distance(const Potential& a, const Potential& b);

  private:
    Potential(SubshiftSpec spec, int depth) : spec_(std::move(spec)), depth_(depth), q_(spec_.alphabet()) {}

    SubshiftSpec spec_;
    int depth_;
    int q_;
    std::vector<double> dense_;  // size q^depth, unspecified at inadmissible ranks
};

/// Finite representation of the transfer operator L_A restricted to locally
/// constant functions of depth d = max(k-1, 1): states are the admissible
/// d-words and (M g)(u) = sum over admissible one-symbol prepends a of
/// e^{A(a u_1 .. u_{k-1})} g(a u_1 .. u_{d-1}).
struct TransferMatrix {
    std::vector<Word> states;     // admissible d-words, lexicographic
    int dim = 0;
    std::vector<double> entries;  // row-major dim x dim; zero pattern mirrors admissibility
    int state_len = 1;
};

TransferMatrix transfer_matrix(const Potential& p);

/// log of the Perron root of the transfer matrix. Requires a primitive subshift.
double pressure(const Potential& p, double tol = 1e-13);

/// Normalizes A: returns (A~, log lambda) with
///   A~(x) = A(x) + log h(prefix) - log h(suffix) - log lambda,
/// h the right Perron eigenvector, so that L_{A~}(1) = 1 and pressure(A~) = 0.
/// For depth-1 inputs the correction needs one symbol of lookahead, so the
/// result has depth 2 unless the shift is full (where h is constant).
std::pair<Potential, double> normalize(const Potential& p, double tol = 1e-13);

}  // namespace gibbsinf
