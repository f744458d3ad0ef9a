#pragma once

#include <array>
#include <utility>
#include <vector>

#include "a2opt/matrix.hpp"
#include "a2opt/network.hpp"

namespace a2opt {

// Maps feature rows into a 2-D latent space: per-feature standardization
// followed by projection onto the two leading principal directions.
struct LatentMapper {
    Matrix mean;  // 1 x d
    Matrix std;   // 1 x d; constant features carry 1 so they standardize to 0
    Matrix proj;  // 2 x d, orthonormal rows

    Matrix project(const Matrix& row) const;   // 1 x d -> 1 x 2
    Matrix project_rows(const Matrix& m) const;  // n x d -> n x 2
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Returns eigenvalues in descending order (stable: equal values keep the
// original diagonal order) and the matching eigenvectors as rows. The fixed
// sweep order makes the result deterministic, which the grouping depends on
// when spectra are degenerate.
std::pair<std::vector<double>, Matrix> symmetric_eigen(const Matrix& sym);

// Fits mean/std (population statistics, so duplicating every row changes
// nothing) and the top-2 principal components of the standardized data. Each
// component row is sign-fixed so its largest-magnitude entry is positive.
// Throws DataError when fewer than 3 rows are given or the standardized data
// has rank < 2.
LatentMapper fit_latent_mapper(const Matrix& features);

// Neighborhood of a cell after adding latent-space neighbors: the
// |N^g(v)| cells nearest to v in the latent plane, drawn from outside
// v and N^g(v). Index lists are ascending.
struct AugmentedNeighborhood {
    std::vector<int> graph_neighbors;
    std::vector<int> latent_neighbors;
    std::vector<int> all() const;  // sorted union
};

// coords is cell_count x 2, aligned with graph indices. Distance ties are
// broken by cell index ascending. n_cap > 0 limits the latent count.
AugmentedNeighborhood augment(const NetworkGraph& graph, const Matrix& coords, int v, int n_cap = 0);

// Quadrant relation of neighbor u to center v in the latent plane:
//   (vx <= ux, vy <= uy) -> 1     (vx > ux, vy <= uy) -> 2
//   (vx > ux, vy > uy)   -> 3     (vx <= ux, vy > uy) -> 4
int assign_group(double vx, double vy, double ux, double uy);
int assign_group(const Matrix& y_v, const Matrix& y_u);  // both 1 x 2

// Buckets `members` (ascending cell indices) into the four quadrant groups
// around center v; each bucket stays ascending.
std::array<std::vector<int>, 4> build_groups(const Matrix& coords, int v, const std::vector<int>& members);

}  // namespace a2opt
