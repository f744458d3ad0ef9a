#include "a2opt/latent.hpp"

#include <algorithm>
#include <cmath>

#include "a2opt/dataset.hpp"

namespace a2opt {

Matrix LatentMapper::project(const Matrix& row) const {
    if (row.rows != 1 || row.cols != mean.cols)
        throw DataError("LatentMapper::project: expected 1x" + std::to_string(mean.cols) + ", got " + shape_str(row));
    Matrix y(1, 2);
    for (int k = 0; k < 2; ++k) {
        double acc = 0;
        for (int j = 0; j < row.cols; ++j) acc += (row.at(0, j) - mean.at(0, j)) / std.at(0, j) * proj.at(k, j);
        y.at(0, k) = acc;
    }
    return y;
}

Matrix LatentMapper::project_rows(const Matrix& m) const {
    if (m.cols != mean.cols)
        throw DataError("LatentMapper::project_rows: expected " + std::to_string(mean.cols) + " columns, got " +
                        shape_str(m));
    Matrix y(m.rows, 2);
    for (int i = 0; i < m.rows; ++i) {
        for (int k = 0; k < 2; ++k) {
            double acc = 0;
            for (int j = 0; j < m.cols; ++j) acc += (m.at(i, j) - mean.at(0, j)) / std.at(0, j) * proj.at(k, j);
            y.at(i, k) = acc;
        }
    }
    return y;
}

std::pair<std::vector<double>, Matrix> symmetric_eigen(const Matrix& sym) {
    if (sym.rows != sym.cols) throw DataError("symmetric_eigen: matrix must be square, got " + shape_str(sym));
    int d = sym.rows;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(sym.at(i, j) - sym.at(j, i)) > 1e-9 * (1.0 + std::abs(sym.at(i, j))))
                throw DataError("symmetric_eigen: matrix is not symmetric");

    Matrix a = sym;
    Matrix v(d, d);
    for (int i = 0; i < d; ++i) v.at(i, i) = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += a.at(p, q) * a.at(p, q);
        if (off < 1e-28 * (1.0 + a.squared_norm())) break;

        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                double apq = a.at(p, q);
                if (apq == 0.0) continue;
                double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < d; ++k) {
                    double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < d; ++k) {
                    double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < d; ++k) {
                    double vkp = v.at(k, p), vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a.at(x, x) > a.at(y, y); });

    std::vector<double> eig(d);
    Matrix rows(d, d);
    for (int i = 0; i < d; ++i) {
        eig[i] = a.at(order[i], order[i]);
        for (int j = 0; j < d; ++j) rows.at(i, j) = v.at(j, order[i]);
    }
    return {eig, rows};
}

LatentMapper fit_latent_mapper(const Matrix& features) {
    int n = features.rows, d = features.cols;
    if (n < 3) throw DataError("fit_latent_mapper: needs at least 3 rows, got " + std::to_string(n));
    if (d < 2) throw DataError("fit_latent_mapper: needs at least 2 features, got " + std::to_string(d));

    LatentMapper m;
    m.mean = Matrix(1, d);
    m.std = Matrix(1, d);
    for (int j = 0; j < d; ++j) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += features.at(i, j);
        m.mean.at(0, j) = s / n;
    }
    for (int j = 0; j < d; ++j) {
        double s = 0;
        for (int i = 0; i < n; ++i) {
            double dev = features.at(i, j) - m.mean.at(0, j);
            s += dev * dev;
        }
        double var = s / n;
        m.std.at(0, j) = var > 0 ? std::sqrt(var) : 1.0;
    }

    Matrix cov(d, d);
    for (int i = 0; i < n; ++i) {
        for (int p = 0; p < d; ++p) {
            double zp = (features.at(i, p) - m.mean.at(0, p)) / m.std.at(0, p);
            for (int q = p; q < d; ++q) {
                double zq = (features.at(i, q) - m.mean.at(0, q)) / m.std.at(0, q);
                cov.at(p, q) += zp * zq;
            }
        }
    }
    for (int p = 0; p < d; ++p)
        for (int q = p; q < d; ++q) {
            cov.at(p, q) /= n;
            cov.at(q, p) = cov.at(p, q);
        }

    auto [eig, vecs] = symmetric_eigen(cov);
    if (eig[1] <= 1e-12)
        throw DataError("fit_latent_mapper: data has fewer than 2 directions of variation");

    m.proj = Matrix(2, d);
    for (int k = 0; k < 2; ++k) {
        int arg = 0;
        for (int j = 1; j < d; ++j)
            if (std::abs(vecs.at(k, j)) > std::abs(vecs.at(k, arg))) arg = j;
        double sign = vecs.at(k, arg) < 0 ? -1.0 : 1.0;
        for (int j = 0; j < d; ++j) m.proj.at(k, j) = sign * vecs.at(k, j);
    }
    return m;
}

std::vector<int> AugmentedNeighborhood::all() const {
    std::vector<int> u = graph_neighbors;
    u.insert(u.end(), latent_neighbors.begin(), latent_neighbors.end());
    std::sort(u.begin(), u.end());
    return u;
}

AugmentedNeighborhood augment(const NetworkGraph& graph, const Matrix& coords, int v, int n_cap) {
    int n_cells = static_cast<int>(graph.cell_count());
    if (coords.rows != n_cells || coords.cols != 2)
        throw DataError("augment: coords must be " + shape_str(n_cells, 2) + ", got " + shape_str(coords));
    if (v < 0 || v >= n_cells) throw DataError("augment: cell index out of range");

    AugmentedNeighborhood out;
    out.graph_neighbors = graph.neighbors(v);
    size_t want = out.graph_neighbors.size();
    if (n_cap > 0) want = std::min(want, static_cast<size_t>(n_cap));
    if (want == 0) return out;

    std::vector<std::pair<double, int>> pool;
    for (int u = 0; u < n_cells; ++u) {
        if (u == v) continue;
        if (std::binary_search(out.graph_neighbors.begin(), out.graph_neighbors.end(), u)) continue;
        double dx = coords.at(u, 0) - coords.at(v, 0);
        double dy = coords.at(u, 1) - coords.at(v, 1);
        pool.push_back({dx * dx + dy * dy, u});
    }
    std::sort(pool.begin(), pool.end());  // pair order = distance, then index
    want = std::min(want, pool.size());
    for (size_t i = 0; i < want; ++i) out.latent_neighbors.push_back(pool[i].second);
    std::sort(out.latent_neighbors.begin(), out.latent_neighbors.end());
    return out;
}

int assign_group(double vx, double vy, double ux, double uy) {
    if (vy <= uy) return vx <= ux ? 1 : 2;
    return vx > ux ? 3 : 4;
}

int assign_group(const Matrix& y_v, const Matrix& y_u) {
    if (y_v.rows != 1 || y_v.cols != 2 || y_u.rows != 1 || y_u.cols != 2)
        throw DataError("assign_group: expected 1x2 coordinates, got " + shape_str(y_v) + " and " + shape_str(y_u));
    return assign_group(y_v.at(0, 0), y_v.at(0, 1), y_u.at(0, 0), y_u.at(0, 1));
}

std::array<std::vector<int>, 4> build_groups(const Matrix& coords, int v, const std::vector<int>& members) {
    if (coords.cols != 2) throw DataError("build_groups: coords must have 2 columns, got " + shape_str(coords));
    std::array<std::vector<int>, 4> groups;
    for (int u : members) {
        int g = assign_group(coords.at(v, 0), coords.at(v, 1), coords.at(u, 0), coords.at(u, 1));
        groups[g - 1].push_back(u);
    }
    return groups;
}

}  // namespace a2opt
