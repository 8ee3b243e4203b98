#include "subsplit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "subsplit/error.hpp"

namespace subsplit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// tan of the Jacobi angle that annihilates the off-diagonal of
// [[app, apq], [apq, aqq]], smaller-angle root.
double jacobi_tangent(double app, double aqq, double apq) {
    const double theta = (aqq - app) / (2.0 * apq);
    return sign_of(theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
}

// One-sided Jacobi on the columns of a (rows >= cols assumed by caller).
Svd hestenes(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<Vector> w(n, Vector(m));
    std::vector<Vector> v(n, Vector(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) w[j][i] = a(i, j);
        v[j][j] = 1.0;
    }

    constexpr int kMaxSweeps = 80;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                double gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += w[p][i] * w[p][i];
                    beta += w[q][i] * w[q][i];
                    gamma += w[p][i] * w[q][i];
                }
                if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
                const double t = jacobi_tangent(alpha, beta, gamma);
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w[p][i];
                    const double wq = w[q][i];
                    w[p][i] = c * wp - s * wq;
                    w[q][i] = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v[p][i];
                    const double vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
                rotated = true;
            }
        }
        if (!rotated) break;
    }

    Vector sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(w[j]);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    Svd out{Matrix(m, n), Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.singular_values[k] = sigma[j];
        for (std::size_t i = 0; i < m; ++i) out.u(i, k) = sigma[j] > 0.0 ? w[j][i] / sigma[j] : 0.0;
        for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v[j][i];
    }
    return out;
}

Matrix hessenberg(const Matrix& a) {
    Matrix h = a;
    const std::size_t n = h.rows();
    if (n < 3) return h;
    Vector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(h(i, k));
        if (scale == 0.0) continue;
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = h(i, k) / scale;
            xnorm2 += v[i] * v[i];
        }
        const double alpha = -sign_of(v[k + 1]) * std::sqrt(xnorm2);
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        // H = I - 2 v vᵀ / (vᵀv) on indices k+1..n-1; apply H·A then A·H.
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * h(i, j);
            s *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
    return h;
}

}  // namespace

EigResult jacobi_symmetric_eig(const Matrix& input) {
    if (!input.is_square()) {
        throw Error(ErrorCode::kDimensionMismatch, "jacobi_symmetric_eig: matrix not square");
    }
    Matrix a = symmetrize(input);
    const std::size_t n = a.rows();
    Matrix v = Matrix::identity(n);
    const double scale = a.frobenius_norm();

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= kEps * kEps * scale || off == 0.0) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= std::numeric_limits<double>::min()) continue;
                const double t = jacobi_tangent(a(p, p), a(q, q), apq);
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    EigResult out;
    out.eigenvalues.reserve(n);
    Matrix vecs(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues.emplace_back(a(order[k], order[k]), 0.0);
        for (std::size_t i = 0; i < n; ++i) vecs(i, k) = v(i, order[k]);
    }
    out.eigenvectors = std::move(vecs);
    return out;
}

Svd jacobi_svd(const Matrix& a) {
    if (a.rows() >= a.cols()) return hestenes(a);
    Svd t = hestenes(a.transpose());
    return Svd{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

Matrix pseudoinverse(const Matrix& a, double absolute_floor) {
    const Svd svd = jacobi_svd(a);
    const double sigma_max = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
    const double cutoff = std::max(
        static_cast<double>(std::max(a.rows(), a.cols())) * sigma_max * 1e-13, absolute_floor);
    Matrix pinv(a.cols(), a.rows());
    for (std::size_t k = 0; k < svd.singular_values.size(); ++k) {
        const double s = svd.singular_values[k];
        if (s <= cutoff) break;  // sorted descending
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double vik = svd.v(i, k) / s;
            if (vik == 0.0) continue;
            for (std::size_t j = 0; j < a.rows(); ++j) pinv(i, j) += vik * svd.u(j, k);
        }
    }
    return pinv;
}

std::vector<ComplexValue> general_eigenvalues(const Matrix& input,
                                              std::optional<int> max_iterations) {
    if (!input.is_square()) {
        throw Error(ErrorCode::kDimensionMismatch, "general_eigenvalues: matrix not square");
    }
    const int n = static_cast<int>(input.rows());
    const int budget = max_iterations.value_or(100 * n);
    Matrix a = hessenberg(input);
    std::vector<ComplexValue> w(static_cast<std::size_t>(n));
    auto at = [&a](int i, int j) -> double& {
        return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    };

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));

    int nn = n - 1;
    int total = 0;
    double t = 0.0;
    double p = 0.0, q = 0.0, r = 0.0, s = 0.0, x = 0.0, y = 0.0, z = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l > 0; --l) {
                s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(at(l, l - 1)) <= kEps * s) {
                    at(l, l - 1) = 0.0;
                    break;
                }
            }
            x = at(nn, nn);
            if (l == nn) {
                w[static_cast<std::size_t>(nn--)] = x + t;
            } else {
                y = at(nn - 1, nn - 1);
                double ww = at(nn, nn - 1) * at(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + ww;
                    z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + std::copysign(z, p);
                        w[static_cast<std::size_t>(nn - 1)] = w[static_cast<std::size_t>(nn)] = x + z;
                        if (z != 0.0) w[static_cast<std::size_t>(nn)] = x - ww / z;
                    } else {
                        w[static_cast<std::size_t>(nn)] = ComplexValue(x + p, -z);
                        w[static_cast<std::size_t>(nn - 1)] = ComplexValue(x + p, z);
                    }
                    nn -= 2;
                } else {
                    if (total >= budget) {
                        throw Error(ErrorCode::kNoConvergence,
                                    "general_eigenvalues: QR iteration budget exhausted");
                    }
                    if (its > 0 && its % 10 == 0) {
                        // exceptional shift
                        t += x;
                        for (int i = 0; i <= nn; ++i) at(i, i) -= x;
                        s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        ww = -0.4375 * s * s;
                    }
                    ++its;
                    ++total;
                    int m = nn - 2;
                    for (; m >= l; --m) {
                        z = at(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - ww) / at(m + 1, m) + at(m, m + 1);
                        q = at(m + 1, m + 1) - z - r - s;
                        r = at(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) +
                                           std::abs(at(m + 1, m + 1)));
                        if (u <= kEps * v) break;
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        at(i + 2, i) = 0.0;
                        if (i != m) at(i + 2, i - 1) = 0.0;
                    }
                    for (int k = m; k < nn; ++k) {
                        if (k != m) {
                            p = at(k, k - 1);
                            q = at(k + 1, k - 1);
                            r = 0.0;
                            if (k + 1 != nn) r = at(k + 2, k - 1);
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        if ((s = std::copysign(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
                            if (k == m) {
                                if (l != m) at(k, k - 1) = -at(k, k - 1);
                            } else {
                                at(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = at(k, j) + q * at(k + 1, j);
                                if (k + 1 != nn) {
                                    p += r * at(k + 2, j);
                                    at(k + 2, j) -= p * z;
                                }
                                at(k + 1, j) -= p * y;
                                at(k, j) -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * at(i, k) + y * at(i, k + 1);
                                if (k + 1 != nn) {
                                    p += z * at(i, k + 2);
                                    at(i, k + 2) -= p * r;
                                }
                                at(i, k + 1) -= p * q;
                                at(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return w;
}

double spectral_radius(const Matrix& a) {
    double rho = 0.0;
    for (const auto& ev : general_eigenvalues(a)) rho = std::max(rho, std::abs(ev));
    return rho;
}

double operator_norm(const Matrix& a) {
    const Matrix gram = a.rows() >= a.cols() ? matmul(a.transpose(), a) : matmul(a, a.transpose());
    const EigResult eig = jacobi_symmetric_eig(gram);
    return std::sqrt(std::max(0.0, eig.eigenvalues.front().real()));
}

}  // namespace subsplit
