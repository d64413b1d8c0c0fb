#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "elastoshock/material.hpp"
#include "elastoshock/vecmath.hpp"

namespace elastoshock {

/// Finite-volume update used for the Eulerian background field.
/// MusclHancock is the production scheme (second order, Rusanov dissipation);
/// LaxFriedrichs is the deliberately different first-order cross-check.
enum class FvScheme { MusclHancock, LaxFriedrichs };

/// One contiguous block of cells on the shared global lattice. Cell j of a
/// window with integer origin o is centered at x = (o + j + 0.5) * dx, so
/// windows from different runs at the same dx can be compared cell-to-cell
/// by global index.
struct FieldWindow {
  long long origin = 0;
  std::vector<Vec6> cell;
};

/// A whole-cell translation applied to one window at a given time.
struct WindowShift {
  double t = 0.0;
  std::size_t window = 0;
  long long cells = 0;
};

/// Recorded window kinematics of a run: the split into per-group windows and
/// every shift taken, in time order. A second solver replaying the schedule
/// evolves on bit-identical window geometry, which makes field comparisons a
/// plain cell-by-cell diff.
struct WindowSchedule {
  double init_lo = 0.0;  // initial single-window extent
  double init_hi = 0.0;
  double split_time = -1.0;  // < 0: the run never split
  std::vector<std::pair<double, double>> spans;
  std::vector<WindowShift> shifts;
};

/// Moving-window solver for dt Phi + A(Phi) dx Phi = 0 on the quasilinear
/// (non-conservative) form. Valid pre-shock only; there is no notion of a
/// weak solution here.
///
/// The field owns one or more disjoint windows. Boundary cells copy outward
/// (outflow); waves leaving a window are absorbed, and anything outside every
/// window is not represented. Shifting and splitting are explicit whole-cell
/// operations driven by the owner; the class never moves a window on its own.
class EulerianField {
 public:
  /// dx > 0; params are validated by the caller (MaterialParams::validate).
  EulerianField(const MaterialParams& params, double dx, FvScheme scheme);

  /// Replaces all windows by a single one covering [lo, hi], filled with
  /// point samples of phi0 at cell centers. Resets time to 0.
  void init_single(double lo, double hi, const std::function<Vec6(double)>& phi0);

  /// Replaces the current windows by one per span. Cells covered by an old
  /// window copy their value; cells outside copy the nearest edge of the
  /// nearest old window. Spans must be non-empty and pairwise disjoint.
  void split(const std::vector<std::pair<double, double>>& spans);

  /// Translates window w by the given signed cell count. Values move with
  /// their global index; cells exposed on the trailing side copy the edge.
  void shift_window(std::size_t w, long long cells);

  /// One explicit step of the active scheme on every window. The caller is
  /// responsible for the CFL restriction (dt * max_speed() <= dx for
  /// MusclHancock, <= 0.8 * dx for LaxFriedrichs is the intended regime).
  void step(double dt);

  /// Max over all cells of the largest characteristic speed. Throws
  /// std::runtime_error if the field has become non-finite.
  double max_speed() const;

  std::size_t window_count() const { return win_.size(); }
  const FieldWindow& window(std::size_t w) const { return win_[w]; }
  double dx() const { return dx_; }
  double time() const { return t_; }
  const MaterialParams& params() const { return p_; }
  FvScheme scheme() const { return scheme_; }

  double cell_center(std::size_t w, std::size_t j) const {
    return (static_cast<double>(win_[w].origin) + static_cast<double>(j) + 0.5) * dx_;
  }

  /// True if some window contains x with at least `margin` whole cells on
  /// both sides. margin = 4 is enough for every sampler below.
  bool covers(double x, int margin = 4) const;

  /// Phi at x by cubic Lagrange interpolation of the four surrounding cells.
  Vec6 sample_state(double x) const;

  /// dx Phi at x: fourth-order central differences at the four surrounding
  /// cells, then the same cubic interpolation.
  Vec6 sample_gradient(double x) const;

  /// Inf-norm gap between the fourth- and second-order gradient estimates
  /// near x. Small for resolved fields; O(|dx Phi|) across an unresolved
  /// front, where sample_gradient carries no information.
  double gradient_error_indicator(double x) const;

  /// dx Phi at cell center j of window w (fourth-order, needs 2 <= j <= m-3).
  Vec6 gradient_at_cell(std::size_t w, std::size_t j) const;

  double sup_phi() const;

 private:
  struct Located {
    std::size_t w;
    long long base;  // cell index within the window, floor of the position
    double s;        // fractional offset in [0, 1)
  };
  Located locate(double x, int margin, const char* who) const;

  MaterialParams p_;
  double dx_;
  FvScheme scheme_;
  double t_ = 0.0;
  std::vector<FieldWindow> win_;
  // step() scratch, kept across calls to avoid reallocation
  std::vector<Vec6> gh_, sl_, hf_, nw_;
};

}  // namespace elastoshock
