#include "nsac/linear_solver.hpp"

#include <cmath>
#include <numeric>

namespace nsac {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void remove_mean(std::span<double> v) {
    if (v.empty()) return;
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double& x : v) x -= m;
}

}  // namespace

SolveStats conjugate_gradient(const LinearOperator& A, std::span<const double> b, std::span<double> x,
                              const SolveOptions& opt) {
    SolveStats st;
    const std::size_t n = b.size();
    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        st.converged = true;
        return st;
    }
    if (opt.project_mean) remove_mean(x);

    std::vector<double> r(n), z(n), p(n), q(n);
    const auto precondition = [&] {
        if (opt.preconditioner) {
            opt.preconditioner(r, z);
            if (opt.project_mean) remove_mean(z);
        } else {
            z = r;
        }
    };
    A(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    if (opt.project_mean) remove_mean(r);
    const double target = opt.rel_tol * b_norm;
    double r_norm = std::sqrt(dot(r, r));
    st.relative_residual = r_norm / b_norm;
    if (r_norm <= target) {
        st.converged = true;
        return st;
    }
    precondition();
    p = z;
    double rz = dot(r, z);
    for (int it = 1; it <= opt.max_iterations; ++it) {
        A(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0) || !(rz > 0.0)) break;
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        if (opt.project_mean) remove_mean(r);
        r_norm = std::sqrt(dot(r, r));
        st.iterations = it;
        st.relative_residual = r_norm / b_norm;
        if (r_norm <= target) {
            st.converged = true;
            break;
        }
        precondition();
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    if (opt.project_mean) remove_mean(x);
    return st;
}

SolveStats bicgstab(const LinearOperator& A, std::span<const double> b, std::span<double> x,
                    const SolveOptions& opt) {
    SolveStats st;
    const std::size_t n = b.size();
    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        st.converged = true;
        return st;
    }
    std::vector<double> r(n), r0(n), p(n, 0.0), v(n, 0.0), s(n), t(n);
    A(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double target = opt.rel_tol * b_norm;
    double r_norm = std::sqrt(dot(r, r));
    st.relative_residual = r_norm / b_norm;
    if (r_norm <= target) {
        st.converged = true;
        return st;
    }
    r0 = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        const double rho_new = dot(r0, r);
        if (rho_new == 0.0) break;
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        A(p, v);
        const double r0v = dot(r0, v);
        if (r0v == 0.0) break;
        alpha = rho / r0v;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        st.iterations = it;
        const double s_norm = std::sqrt(dot(s, s));
        if (s_norm <= target) {
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
            st.relative_residual = s_norm / b_norm;
            st.converged = true;
            break;
        }
        A(s, t);
        const double tt = dot(t, t);
        if (tt == 0.0) break;
        omega = dot(t, s) / tt;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
        r_norm = std::sqrt(dot(r, r));
        st.relative_residual = r_norm / b_norm;
        if (r_norm <= target) {
            st.converged = true;
            break;
        }
        if (omega == 0.0) break;
    }
    return st;
}

}  // namespace nsac
