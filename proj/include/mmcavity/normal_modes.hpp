#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmcavity/geometry.hpp"
#include "mmcavity/spectrum.hpp"

namespace mmcavity {

/// Linear map between individual membrane coordinates and collective modes.
/// Rows of `to_collective` express each collective coordinate as a combination
/// of individual displacements; columns of `to_individual` are the
/// displacement patterns of the modes.  A mode is flagged symmetric when the
/// optical spectrum is even in its amplitude about the symmetric rest layout.
struct NormalModeBasis {
    int n_membranes = 0;
    std::vector<std::vector<double>> to_collective;
    std::vector<std::vector<double>> to_individual;
    std::vector<bool> symmetric;
    std::vector<std::string> mode_names;
};

/// Collective-mode basis for N membranes (1 <= N <= 10).
///
/// N = 2 and N = 3 use the fixed conventional bases
///   {q = q1 - q2, Q = (q1 + q2)/2}                      (relative, com)
///   {(q1+q2+q3)/3, (q1-2q2+q3)/6, (q3-q1)/2}            (com, scissors, stretch)
/// kept verbatim, without orthonormalization.  For N >= 4 the modes are the
/// standing-wave patterns of a uniform free chain, v_j = cos((j-1/2) p pi / N)
/// for p = 0..N-1, with symmetry flags from reflection parity (p even).
NormalModeBasis basis(int n_membranes);

/// Number of symmetric collective modes: N/2 for N even, N/2 + 1 for N odd.
int symmetric_count(int n_membranes);

struct CouplingTermCounts {
    std::optional<int> remaining;  ///< N(N-2)/8 for N even; unspecified for N odd
    int total;                     ///< N(N-1)/2
};

/// Residual mode-mode coupling terms after the symmetric-mode cancellations
/// (N >= 2).
CouplingTermCounts coupling_term_counts(int n_membranes);

/// Membrane displacement pattern of one mode at amplitude a.
std::vector<double> mode_displacement(const NormalModeBasis& b, int mode_index,
                                      double amplitude);

/// Displaces mode `mode_index` by +/- amplitude about the rest layout, solves
/// both root sets over the window, and returns the maximum absolute root
/// mismatch.  A symmetric mode yields a residual at root-finding tolerance;
/// an asymmetric one a macroscopic residual.  A root-count mismatch between
/// the two scans is reported as +infinity.
double check_spectrum_symmetry(const CavityGeometry& geom, const NormalModeBasis& b,
                               int mode_index, double amplitude, Window window,
                               const ScanOptions& opts = {});

/// Default window covering multiplet n for symmetry checks.
Window multiplet_window(const CavityGeometry& geom, int n);

}  // namespace mmcavity
