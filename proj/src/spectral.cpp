#include "nsac/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <array>
#include <map>
#include <tuple>
#include <mutex>
#include <numbers>
#include <vector>

#include "nsac/errors.hpp"

namespace nsac {

struct NeumannSpectralSolver::Impl {
    Grid grid;
    std::size_t size = 0;
    double* buffer = nullptr;
    fftw_plan forward = nullptr;  // DCT-II
    fftw_plan inverse = nullptr;  // DCT-III
    std::vector<double> eig;      // eigenvalues of -Lap, in storage order
    double normalization = 1.0;
};

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

NeumannSpectralSolver::NeumannSpectralSolver(const Grid& g) : impl_(std::make_unique<Impl>()) {
    Impl& p = *impl_;
    p.grid = g;
    p.size = g.cell_count();
    p.buffer = static_cast<double*>(fftw_malloc(sizeof(double) * p.size));
    if (!p.buffer) throw NumericalError("spectral solver: allocation failed");

    // FFTW is row-major: the slowest axis comes first.
    int dims[3];
    fftw_r2r_kind fwd[3], inv[3];
    for (int r = 0; r < g.dim; ++r) {
        dims[r] = g.n[g.dim - 1 - r];
        fwd[r] = FFTW_REDFT10;
        inv[r] = FFTW_REDFT01;
    }
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        p.forward = fftw_plan_r2r(g.dim, dims, p.buffer, p.buffer, fwd, FFTW_ESTIMATE);
        p.inverse = fftw_plan_r2r(g.dim, dims, p.buffer, p.buffer, inv, FFTW_ESTIMATE);
    }
    if (!p.forward || !p.inverse) throw NumericalError("spectral solver: FFTW planning failed");

    std::array<std::vector<double>, 3> axis_eig;
    p.normalization = 1.0;
    for (int a = 0; a < 3; ++a) {
        axis_eig[a].assign(g.n[a], 0.0);
        if (a >= g.dim) continue;
        p.normalization *= 2.0 * g.n[a];
        for (int k = 0; k < g.n[a]; ++k) {
            const double s = std::sin(std::numbers::pi * k / (2.0 * g.n[a]));
            axis_eig[a][k] = 4.0 * s * s / (g.h[a] * g.h[a]);
        }
    }
    p.eig.resize(p.size);
    std::size_t idx = 0;
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) p.eig[idx++] = axis_eig[0][i] + axis_eig[1][j] + axis_eig[2][k];
}

NeumannSpectralSolver::~NeumannSpectralSolver() {
    if (!impl_) return;
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->forward) fftw_destroy_plan(impl_->forward);
    if (impl_->inverse) fftw_destroy_plan(impl_->inverse);
    fftw_free(impl_->buffer);
}

void NeumannSpectralSolver::solve(double shift, double scale, std::span<const double> b, std::span<double> x) const {
    const Impl& p = *impl_;
    // fftw_malloc keeps the planning alignment, so the new-array execute
    // interface applies and concurrent calls never share a buffer.
    std::unique_ptr<double, decltype(&fftw_free)> work(static_cast<double*>(fftw_malloc(sizeof(double) * p.size)),
                                                       &fftw_free);
    if (!work) throw NumericalError("spectral solver: allocation failed");
    double* w = work.get();
    std::copy(b.begin(), b.end(), w);
    fftw_execute_r2r(p.forward, w, w);
    for (std::size_t i = 0; i < p.size; ++i) {
        const double d = shift + scale * p.eig[i];
        w[i] = d > 0.0 ? w[i] / (d * p.normalization) : 0.0;
    }
    fftw_execute_r2r(p.inverse, w, w);
    std::copy(w, w + p.size, x.begin());
}

const NeumannSpectralSolver& spectral_solver_for(const Grid& g) {
    static std::mutex m;
    static std::map<std::tuple<int, Index3, std::array<double, 3>>, std::unique_ptr<NeumannSpectralSolver>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto key = std::make_tuple(g.dim, g.n, g.h);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<NeumannSpectralSolver>(g)).first;
    return *it->second;
}

}  // namespace nsac
