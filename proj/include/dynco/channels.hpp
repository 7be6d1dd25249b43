#ifndef DYNCO_CHANNELS_HPP
#define DYNCO_CHANNELS_HPP

// Linear maps between operator spaces, stored canonically by their Choi
// matrix
//
//     J = sum_{i,j} Theta(|i><j|) (x) |i><j|       (output factor first),
//
// so that J(k * dim_in + i, l * dim_in + j) = <k| Theta(|i><j|) |l>, the
// index coefficient Theta^{i,j}_{k,l}. Kraus operators and the 4-index view
// are derived from J on demand.
//
// The incoherent basis is the computational basis throughout.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynco/linalg.hpp"
#include "dynco/random.hpp"
#include "dynco/state.hpp"

namespace dynco {

inline constexpr double kFlagTol = 1e-9;
inline constexpr double kChannelTol = 1e-8;
inline constexpr double kMembershipTol = 1e-8;
inline constexpr double kKrausDropTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

struct MapFlags {
  bool hermiticity_preserving = false;
  bool completely_positive = false;
  bool trace_preserving = false;
};

class LinearMap {
 public:
  /// Flags are read off the Choi matrix at `flag_tol`.
  LinearMap(Eigen::Index dim_in, Eigen::Index dim_out, ComplexMatrix choi,
            double flag_tol = kFlagTol)
      : dim_in_(dim_in), dim_out_(dim_out), choi_(std::move(choi)) {
    if (dim_in_ < 1 || dim_out_ < 1) throw DimensionError("LinearMap: dimensions must be positive");
    if (choi_.rows() != dim_in_ * dim_out_ || choi_.cols() != dim_in_ * dim_out_) {
      throw DimensionError("LinearMap: Choi matrix is " + std::to_string(choi_.rows()) + "x" +
                           std::to_string(choi_.cols()) + ", expected side " +
                           std::to_string(dim_in_ * dim_out_));
    }
    require_well_formed(choi_, "LinearMap");
    flags_ = compute_flags(flag_tol);
  }

  Eigen::Index dim_in() const { return dim_in_; }
  Eigen::Index dim_out() const { return dim_out_; }
  const ComplexMatrix& choi() const { return choi_; }
  const MapFlags& flags() const { return flags_; }

  /// <k| Theta(|i><j|) |l>
  Complex coeff(Eigen::Index i, Eigen::Index j, Eigen::Index k, Eigen::Index l) const {
    return choi_(k * dim_in_ + i, l * dim_in_ + j);
  }

  /// Theta(|i><j|)
  ComplexMatrix image(Eigen::Index i, Eigen::Index j) const {
    ComplexMatrix out(dim_out_, dim_out_);
    for (Eigen::Index k = 0; k < dim_out_; ++k) {
      for (Eigen::Index l = 0; l < dim_out_; ++l) out(k, l) = coeff(i, j, k, l);
    }
    return out;
  }

  /// max |min eigenvalue of J| if negative, else 0.
  double cp_defect() const {
    const double h = hermiticity_defect(choi_);
    if (h > 1e-6) return h;
    return std::max(0.0, -min_eigenvalue(HermitianView(choi_, 1e-6)));
  }

  double tp_defect() const {
    const ComplexMatrix t = partial_trace(choi_, dim_out_, dim_in_, Subsystem::B);
    return max_abs(t - ComplexMatrix::Identity(dim_in_, dim_in_));
  }

 private:
  MapFlags compute_flags(double tol) const {
    MapFlags f;
    f.hermiticity_preserving = hermiticity_defect(choi_) <= tol;
    f.completely_positive = f.hermiticity_preserving && cp_defect() <= tol;
    f.trace_preserving = tp_defect() <= tol;
    return f;
  }

  Eigen::Index dim_in_;
  Eigen::Index dim_out_;
  ComplexMatrix choi_;
  MapFlags flags_;
};

inline void require_same_shape(const LinearMap& a, const LinearMap& b, const char* what) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw DimensionError(std::string(what) + ": maps have different shapes");
  }
}

inline LinearMap operator+(const LinearMap& a, const LinearMap& b) {
  require_same_shape(a, b, "LinearMap::operator+");
  return LinearMap(a.dim_in(), a.dim_out(), a.choi() + b.choi());
}

inline LinearMap operator-(const LinearMap& a, const LinearMap& b) {
  require_same_shape(a, b, "LinearMap::operator-");
  return LinearMap(a.dim_in(), a.dim_out(), a.choi() - b.choi());
}

inline LinearMap operator*(double s, const LinearMap& a) {
  return LinearMap(a.dim_in(), a.dim_out(), s * a.choi());
}

inline bool is_cptp(const LinearMap& map, double tol = kChannelTol) {
  return hermiticity_defect(map.choi()) <= tol && map.cp_defect() <= tol && map.tp_defect() <= tol;
}

/// A completely positive, trace-preserving LinearMap. Construction checks
/// CPTP at `tol` and throws ValidationError otherwise.
class Channel : public LinearMap {
 public:
  explicit Channel(const LinearMap& map, double tol = kChannelTol)
      : LinearMap(map.dim_in(), map.dim_out(), (map.choi() + map.choi().adjoint()) / 2.0,
                  std::max(tol, kFlagTol)) {
    if (!is_cptp(map, tol)) {
      throw ValidationError("Channel: map is not CPTP (cp defect " +
                            std::to_string(map.cp_defect()) + ", tp defect " +
                            std::to_string(map.tp_defect()) + ")");
    }
  }
};

struct KrausSet {
  std::vector<ComplexMatrix> operators;

  Eigen::Index dim_in() const { return operators.empty() ? 0 : operators.front().cols(); }
  Eigen::Index dim_out() const { return operators.empty() ? 0 : operators.front().rows(); }

  /// || sum_n K_n^dagger K_n - I ||_max
  double completeness_defect() const {
    ComplexMatrix s = ComplexMatrix::Zero(dim_in(), dim_in());
    for (const auto& k : operators) s += k.adjoint() * k;
    return max_abs(s - ComplexMatrix::Identity(dim_in(), dim_in()));
  }
};

/// Choi matrix of rho -> sum_n K_n rho K_n^dagger (no completeness check).
inline ComplexMatrix choi_from_kraus(std::span<const ComplexMatrix> ops) {
  const Eigen::Index din = ops.front().cols();
  const Eigen::Index dout = ops.front().rows();
  ComplexMatrix j = ComplexMatrix::Zero(din * dout, din * dout);
  for (const auto& k : ops) {
    // vec with row index (k_out * din + i_in)
    ComplexVector v(din * dout);
    for (Eigen::Index a = 0; a < dout; ++a) {
      for (Eigen::Index i = 0; i < din; ++i) v(a * din + i) = k(a, i);
    }
    j += v * v.adjoint();
  }
  return j;
}

inline Channel from_kraus(const KrausSet& ks, double tol = kFlagTol) {
  if (ks.operators.empty()) throw ValidationError("from_kraus: empty Kraus set");
  for (const auto& k : ks.operators) {
    require_well_formed(k, "from_kraus");
    if (k.rows() != ks.dim_out() || k.cols() != ks.dim_in()) {
      throw DimensionError("from_kraus: Kraus operators have inconsistent shapes");
    }
  }
  const double defect = ks.completeness_defect();
  if (defect > tol) {
    throw ValidationError("from_kraus: incomplete Kraus set (defect " + std::to_string(defect) +
                          ")");
  }
  return Channel(LinearMap(ks.dim_in(), ks.dim_out(), choi_from_kraus(ks.operators)),
                 std::max(tol, kChannelTol));
}

/// Kraus operators from the eigendecomposition of the Choi matrix; eigenvalues
/// below `drop_tol` are discarded.
inline KrausSet to_kraus(const Channel& ch, double drop_tol = kKrausDropTol) {
  const auto eig = eig_hermitian(HermitianView(ch.choi(), 1e-8));
  KrausSet ks;
  for (Eigen::Index n = eig.values.size() - 1; n >= 0; --n) {
    if (eig.values(n) < drop_tol) break;
    ComplexMatrix k(ch.dim_out(), ch.dim_in());
    const double s = std::sqrt(eig.values(n));
    for (Eigen::Index a = 0; a < ch.dim_out(); ++a) {
      for (Eigen::Index i = 0; i < ch.dim_in(); ++i) k(a, i) = s * eig.vectors(a * ch.dim_in() + i, n);
    }
    ks.operators.push_back(std::move(k));
  }
  return ks;
}

inline ComplexMatrix apply_map(const LinearMap& map, const ComplexMatrix& op) {
  if (op.rows() != map.dim_in() || op.cols() != map.dim_in()) {
    throw DimensionError("apply_map: operator is " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + ", map expects dimension " +
                         std::to_string(map.dim_in()));
  }
  const Eigen::Index din = map.dim_in();
  const Eigen::Index dout = map.dim_out();
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (Eigen::Index i = 0; i < din; ++i) {
    for (Eigen::Index j = 0; j < din; ++j) {
      const Complex w = op(i, j);
      if (w == Complex(0.0)) continue;
      for (Eigen::Index k = 0; k < dout; ++k) {
        for (Eigen::Index l = 0; l < dout; ++l) out(k, l) += w * map.coeff(i, j, k, l);
      }
    }
  }
  return out;
}

inline DensityMatrix apply_map(const Channel& ch, const DensityMatrix& rho) {
  return DensityMatrix(apply_map(static_cast<const LinearMap&>(ch), rho.matrix()), 1e-8);
}

/// Choi matrix of the map whose action on |i><j| is images(i, j).
template <typename ImageFn>
ComplexMatrix choi_from_images(Eigen::Index dim_in, Eigen::Index dim_out, ImageFn&& images) {
  ComplexMatrix j = ComplexMatrix::Zero(dim_in * dim_out, dim_in * dim_out);
  for (Eigen::Index a = 0; a < dim_in; ++a) {
    for (Eigen::Index b = 0; b < dim_in; ++b) {
      const ComplexMatrix img = images(a, b);
      for (Eigen::Index k = 0; k < dim_out; ++k) {
        for (Eigen::Index l = 0; l < dim_out; ++l) j(k * dim_in + a, l * dim_in + b) = img(k, l);
      }
    }
  }
  return j;
}

/// second o first
inline LinearMap compose(const LinearMap& second, const LinearMap& first) {
  if (first.dim_out() != second.dim_in()) {
    throw DimensionError("compose: first.dim_out " + std::to_string(first.dim_out()) +
                         " != second.dim_in " + std::to_string(second.dim_in()));
  }
  return LinearMap(first.dim_in(), second.dim_out(),
                   choi_from_images(first.dim_in(), second.dim_out(), [&](Eigen::Index i, Eigen::Index j) {
                     return apply_map(second, first.image(i, j));
                   }));
}

inline Channel compose(const Channel& second, const Channel& first) {
  return Channel(compose(static_cast<const LinearMap&>(second), static_cast<const LinearMap&>(first)));
}

/// a (x) b acting on the product space, input index i_a * b.dim_in + i_b.
inline LinearMap tensor(const LinearMap& a, const LinearMap& b) {
  const Eigen::Index din = a.dim_in() * b.dim_in();
  const Eigen::Index dout = a.dim_out() * b.dim_out();
  return LinearMap(din, dout, choi_from_images(din, dout, [&](Eigen::Index i, Eigen::Index j) {
                     return kron(a.image(i / b.dim_in(), j / b.dim_in()),
                                 b.image(i % b.dim_in(), j % b.dim_in()));
                   }));
}

inline Channel tensor(const Channel& a, const Channel& b) {
  return Channel(tensor(static_cast<const LinearMap&>(a), static_cast<const LinearMap&>(b)));
}

/// Four-index view Theta^{i,j}_{k,l} = <k| Theta(|i><j|) |l>.
class IndexCoeffs {
 public:
  explicit IndexCoeffs(const LinearMap& map)
      : dim_in_(map.dim_in()), dim_out_(map.dim_out()), choi_(map.choi()) {}

  Complex operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k, Eigen::Index l) const {
    return choi_(k * dim_in_ + i, l * dim_in_ + j);
  }

  Eigen::Index dim_in() const { return dim_in_; }
  Eigen::Index dim_out() const { return dim_out_; }

  /// Largest violations of the three necessary conditions every channel's
  /// coefficients satisfy: nonnegative populations Theta^{n,n}_{m,m},
  /// conjugate symmetry Theta^{i,j}_{k,l} = conj(Theta^{j,i}_{l,k}), and
  /// sum_m Theta^{i,j}_{m,m} = delta_ij.
  struct Defects {
    double positivity = 0.0;
    double conjugate_symmetry = 0.0;
    double trace = 0.0;
  };

  Defects channel_identity_defects() const {
    Defects d;
    for (Eigen::Index i = 0; i < dim_in_; ++i) {
      for (Eigen::Index j = 0; j < dim_in_; ++j) {
        Complex tr = 0.0;
        for (Eigen::Index k = 0; k < dim_out_; ++k) {
          tr += (*this)(i, j, k, k);
          for (Eigen::Index l = 0; l < dim_out_; ++l) {
            d.conjugate_symmetry =
                std::max(d.conjugate_symmetry, std::abs((*this)(i, j, k, l) - std::conj((*this)(j, i, l, k))));
          }
        }
        d.trace = std::max(d.trace, std::abs(tr - (i == j ? 1.0 : 0.0)));
      }
      for (Eigen::Index m = 0; m < dim_out_; ++m) {
        const Complex p = (*this)(i, i, m, m);
        d.positivity = std::max({d.positivity, -p.real(), std::abs(p.imag())});
      }
    }
    return d;
  }

 private:
  Eigen::Index dim_in_;
  Eigen::Index dim_out_;
  ComplexMatrix choi_;
};

inline IndexCoeffs index_coeffs(const LinearMap& map) { return IndexCoeffs(map); }

// ---------------------------------------------------------------------------
// Standard channels

inline Channel unitary_channel(const ComplexMatrix& u) {
  require_well_formed(u, "unitary_channel");
  if (u.rows() != u.cols()) throw DimensionError("unitary_channel: matrix is not square");
  const double defect = max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
  if (defect > kUnitaryTol) {
    throw ValidationError("unitary_channel: matrix is not unitary (defect " + std::to_string(defect) +
                          ")");
  }
  return from_kraus(KrausSet{{u}}, 1e-9);
}

inline Channel identity_channel(Eigen::Index dim) {
  return unitary_channel(ComplexMatrix::Identity(dim, dim));
}

inline Channel dephasing(Eigen::Index dim) {
  if (dim < 1) throw DimensionError("dephasing: dim must be >= 1");
  KrausSet ks;
  for (Eigen::Index i = 0; i < dim; ++i) ks.operators.push_back(basis_projector(dim, i));
  return from_kraus(ks);
}

/// id - Delta. Hermiticity preserving, neither CP nor TP.
inline LinearMap complementary_dephasing(Eigen::Index dim) {
  return identity_channel(dim) - dephasing(dim);
}

/// sigma -> sum_{i,j} e^{i(phi_i - phi_j)} |i><i| sigma |j><j|
inline Channel phase_channel(std::span<const double> phi) {
  if (phi.empty()) throw DimensionError("phase_channel: empty phase vector");
  const auto dim = static_cast<Eigen::Index>(phi.size());
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) u(i, i) = std::polar(1.0, phi[static_cast<std::size_t>(i)]);
  return unitary_channel(u);
}

inline ComplexMatrix hadamard_matrix() {
  ComplexMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

inline Channel hadamard() { return unitary_channel(hadamard_matrix()); }

inline ComplexMatrix fourier_matrix(Eigen::Index dim) {
  ComplexMatrix f(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % dim) / static_cast<double>(dim);
      f(j, k) = norm * std::polar(1.0, angle);
    }
  }
  return f;
}

inline Channel qft(Eigen::Index dim) {
  if (dim < 1) throw DimensionError("qft: dim must be >= 1");
  return unitary_channel(fourier_matrix(dim));
}

/// |a>|b> -> |b>|a>, from A (x) B to B (x) A.
inline Channel swap(Eigen::Index dim_a, Eigen::Index dim_b) {
  if (dim_a < 1 || dim_b < 1) throw DimensionError("swap: dims must be >= 1");
  ComplexMatrix u = ComplexMatrix::Zero(dim_a * dim_b, dim_a * dim_b);
  for (Eigen::Index a = 0; a < dim_a; ++a) {
    for (Eigen::Index b = 0; b < dim_b; ++b) u(b * dim_a + a, a * dim_b + b) = 1.0;
  }
  return unitary_channel(u);
}

/// Unitary |i> -> e^{i phases[i]} |perm[i]>.
inline Channel permutation_phase_channel(std::span<const Eigen::Index> perm, std::span<const double> phases) {
  if (perm.size() != phases.size() || perm.empty()) {
    throw DimensionError("permutation_phase_channel: permutation and phases differ in length");
  }
  const auto dim = static_cast<Eigen::Index>(perm.size());
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    u(perm[static_cast<std::size_t>(i)], i) = std::polar(1.0, phases[static_cast<std::size_t>(i)]);
  }
  return unitary_channel(u);
}

inline Channel mixture(std::span<const Channel> channels, std::span<const double> probs) {
  if (channels.empty() || channels.size() != probs.size()) {
    throw ValidationError("mixture: need one probability per channel");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("mixture: negative or non-finite probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("mixture: probabilities do not sum to 1");
  ComplexMatrix j = ComplexMatrix::Zero(channels.front().choi().rows(), channels.front().choi().cols());
  for (std::size_t n = 0; n < channels.size(); ++n) {
    require_same_shape(channels[n], channels.front(), "mixture");
    j += probs[n] * channels[n].choi();
  }
  return Channel(LinearMap(channels.front().dim_in(), channels.front().dim_out(), std::move(j)));
}

/// p1 H rho H^dagger + (1 - p1) rho.
inline Channel hadamard_mixture(double p1) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw ValidationError("hadamard_mixture: p1 outside [0, 1]");
  const std::vector<Channel> parts{hadamard(), identity_channel(2)};
  const std::vector<double> probs{p1, 1.0 - p1};
  return mixture(parts, probs);
}

// ---------------------------------------------------------------------------
// Membership

/// max_{i != j, k} |Theta^{i,j}_{k,k}|: how strongly output populations see input coherences.
inline double detection_defect(const LinearMap& map) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < map.dim_in(); ++i) {
    for (Eigen::Index j = 0; j < map.dim_in(); ++j) {
      if (i == j) continue;
      for (Eigen::Index k = 0; k < map.dim_out(); ++k) worst = std::max(worst, std::abs(map.coeff(i, j, k, k)));
    }
  }
  return worst;
}

/// max_{i, k != l} |Theta^{i,i}_{k,l}|: coherence created from incoherent inputs.
inline double creation_defect(const LinearMap& map) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < map.dim_in(); ++i) {
    for (Eigen::Index k = 0; k < map.dim_out(); ++k) {
      for (Eigen::Index l = 0; l < map.dim_out(); ++l) {
        if (k != l) worst = std::max(worst, std::abs(map.coeff(i, i, k, l)));
      }
    }
  }
  return worst;
}

inline bool is_detection_incoherent(const Channel& ch, double tol = kMembershipTol) {
  return detection_defect(ch) <= tol;
}

inline bool is_mio(const Channel& ch, double tol = kMembershipTol) {
  return creation_defect(ch) <= tol;
}

/// Overloads for maps that still need the CPTP precondition checked.
inline bool is_detection_incoherent(const LinearMap& map, double tol = kMembershipTol) {
  if (!is_cptp(map)) throw ValidationError("is_detection_incoherent: map is not CPTP");
  return detection_defect(map) <= tol;
}

inline bool is_mio(const LinearMap& map, double tol = kMembershipTol) {
  if (!is_cptp(map)) throw ValidationError("is_mio: map is not CPTP");
  return creation_defect(map) <= tol;
}

/// || Delta Theta - Delta Theta Delta ||_max over Choi entries.
inline double detection_defect_direct(const LinearMap& map) {
  const Channel dout = dephasing(map.dim_out());
  const LinearMap left = compose(dout, map);
  return max_abs(left.choi() - compose(left, dephasing(map.dim_in())).choi());
}

/// || Theta Delta - Delta Theta Delta ||_max over Choi entries.
inline double creation_defect_direct(const LinearMap& map) {
  const LinearMap right = compose(map, dephasing(map.dim_in()));
  return max_abs(right.choi() - compose(dephasing(map.dim_out()), right).choi());
}

// ---------------------------------------------------------------------------
// Random generators

/// Stinespring: random isometry into output (x) environment, environment traced out.
inline Channel random_channel(Eigen::Index dim_in, Eigen::Index dim_out, Rng& rng) {
  if (dim_in < 1 || dim_out < 1) throw DimensionError("random_channel: dims must be >= 1");
  const Eigen::Index rank = dim_in * dim_out;
  const ComplexMatrix v = random_isometry(dim_out * rank, dim_in, rng);
  KrausSet ks;
  for (Eigen::Index n = 0; n < rank; ++n) ks.operators.push_back(v.block(n * dim_out, 0, dim_out, dim_in));
  return from_kraus(ks);
}

inline Channel random_permutation_phase(Eigen::Index dim, Rng& rng) {
  const auto perm = random_permutation(dim, rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> phases(static_cast<std::size_t>(dim));
  for (auto& p : phases) p = angle(rng);
  return permutation_phase_channel(perm, phases);
}

/// Phase-covariant twirl of a square channel: keeps Delta(Xi(|i><i|)) and the
/// |i><j| component of Xi(|i><j|). The result is both DI and MIO.
inline Channel phase_covariant_part(const Channel& xi) {
  if (xi.dim_in() != xi.dim_out()) throw DimensionError("phase_covariant_part: channel must be square");
  const Eigen::Index d = xi.dim_in();
  return Channel(LinearMap(d, d, choi_from_images(d, d, [&](Eigen::Index i, Eigen::Index j) {
                             ComplexMatrix img = ComplexMatrix::Zero(d, d);
                             if (i == j) {
                               for (Eigen::Index k = 0; k < d; ++k) img(k, k) = xi.coeff(i, i, k, k);
                             } else {
                               img(i, j) = xi.coeff(i, j, i, j);
                             }
                             return img;
                           })));
}

namespace detail {

inline Channel mix2(const Channel& a, const Channel& b, double t) {
  const std::vector<Channel> parts{a, b};
  const std::vector<double> probs{t, 1.0 - t};
  return mixture(parts, probs);
}

}  // namespace detail

/// Xi o Delta for random Xi; for square shapes, sometimes mixed with a random
/// permutation-phase unitary or replaced by a phase-covariant channel.
inline Channel random_di(Eigen::Index dim_in, Eigen::Index dim_out, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Channel base = compose(random_channel(dim_in, dim_out, rng), dephasing(dim_in));
  Channel out = base;
  if (dim_in == dim_out) {
    const double family = unit(rng);
    if (family < 0.35) {
      out = detail::mix2(base, random_permutation_phase(dim_in, rng), unit(rng));
    } else if (family < 0.7) {
      const Channel cov = phase_covariant_part(random_channel(dim_in, dim_out, rng));
      out = detail::mix2(compose(random_permutation_phase(dim_out, rng), cov), base, 0.5 + 0.5 * unit(rng));
    }
  }
  if (!is_detection_incoherent(out)) throw ValidationError("random_di: generator produced a non-DI channel");
  return out;
}

/// Delta o Xi for random Xi, with the same optional square-shape families as random_di.
inline Channel random_mio(Eigen::Index dim_in, Eigen::Index dim_out, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Channel base = compose(dephasing(dim_out), random_channel(dim_in, dim_out, rng));
  Channel out = base;
  if (dim_in == dim_out) {
    const double family = unit(rng);
    if (family < 0.35) {
      out = detail::mix2(base, random_permutation_phase(dim_in, rng), unit(rng));
    } else if (family < 0.7) {
      const Channel cov = phase_covariant_part(random_channel(dim_in, dim_out, rng));
      out = detail::mix2(compose(cov, random_permutation_phase(dim_in, rng)), base, 0.5 + 0.5 * unit(rng));
    }
  }
  if (!is_mio(out)) throw ValidationError("random_mio: generator produced a non-MIO channel");
  return out;
}

/// Complete parametrization of detection-incoherent channels. A channel is DI
/// iff for every output k the vectors v_{k,i} = (<k|K_n|i>)_n are mutually
/// orthogonal across inputs i; trace preservation then reduces to
/// sum_k |v_{k,i}|^2 = 1. Writing v_{k,i} = sqrt(p_{k,i}) u_{k,i} with
/// orthonormal u_{k,.} and a column-stochastic p covers the whole class.
struct DiParametrization {
  Eigen::Index dim_in;
  Eigen::Index dim_out;
  Eigen::Index rank;  // Kraus rank, >= dim_in

  std::size_t size() const {
    return static_cast<std::size_t>(dim_out * dim_in + dim_out * rank * dim_in * 2);
  }

  /// Any real vector of length size() maps to a valid DI channel.
  Channel channel(std::span<const double> params) const {
    if (params.size() != size()) throw DimensionError("DiParametrization: wrong parameter count");
    std::size_t pos = 0;
    RealMatrix logits(dim_out, dim_in);
    for (Eigen::Index k = 0; k < dim_out; ++k) {
      for (Eigen::Index i = 0; i < dim_in; ++i) logits(k, i) = params[pos++];
    }
    RealMatrix p(dim_out, dim_in);
    for (Eigen::Index i = 0; i < dim_in; ++i) {
      const double top = logits.col(i).maxCoeff();
      p.col(i) = (logits.col(i).array() - top).exp().matrix();
      p.col(i) /= p.col(i).sum();
    }
    std::vector<ComplexMatrix> kraus(static_cast<std::size_t>(rank), ComplexMatrix::Zero(dim_out, dim_in));
    for (Eigen::Index k = 0; k < dim_out; ++k) {
      ComplexMatrix g(rank, dim_in);
      for (Eigen::Index n = 0; n < rank; ++n) {
        for (Eigen::Index i = 0; i < dim_in; ++i) {
          g(n, i) = Complex(params[pos], params[pos + 1]);
          pos += 2;
        }
      }
      const ComplexMatrix u = orthonormalize_columns(g);
      for (Eigen::Index n = 0; n < rank; ++n) {
        for (Eigen::Index i = 0; i < dim_in; ++i) {
          kraus[static_cast<std::size_t>(n)](k, i) = std::sqrt(p(k, i)) * u(n, i);
        }
      }
    }
    return Channel(LinearMap(dim_in, dim_out, choi_from_kraus(kraus)));
  }

  std::vector<double> random_parameters(Rng& rng, double logit_scale = 1.5) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> params(size());
    const auto n_logits = static_cast<std::size_t>(dim_out * dim_in);
    for (std::size_t q = 0; q < params.size(); ++q) params[q] = normal(rng) * (q < n_logits ? logit_scale : 1.0);
    return params;
  }
};

inline Channel random_di_general(Eigen::Index dim_in, Eigen::Index dim_out, Rng& rng) {
  const DiParametrization param{dim_in, dim_out, dim_in * dim_out};
  return param.channel(param.random_parameters(rng));
}

}  // namespace dynco

#endif  // DYNCO_CHANNELS_HPP
