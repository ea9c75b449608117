#include "rotorqec/lindblad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rotorqec {

Observable Observable::expectation(std::string name, LinOp op) {
    auto shared = std::make_shared<LinOp>(std::move(op));
    return {std::move(name),
            [shared](const DensityOp& rho) { return rho.expectation(*shared); }};
}

Observable Observable::custom(std::string name, std::function<double(const DensityOp&)> fn) {
    return {std::move(name), std::move(fn)};
}

namespace {

struct Entries {
    std::vector<int> row, col;
    std::vector<cxd> val;

    int size() const { return static_cast<int>(row.size()); }

    static Entries from(const SpMat& m, bool sort_rows) {
        struct E { int r, c; cxd v; };
        std::vector<E> tmp;
        tmp.reserve(m.nonZeros());
        for (int outer = 0; outer < m.outerSize(); ++outer)
            for (SpMat::InnerIterator it(m, outer); it; ++it)
                tmp.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
        if (sort_rows)
            std::stable_sort(tmp.begin(), tmp.end(), [](const E& a, const E& b) {
                return a.r < b.r || (a.r == b.r && a.c < b.c);
            });
        Entries out;
        out.row.reserve(tmp.size());
        for (const auto& e : tmp) {
            out.row.push_back(e.r);
            out.col.push_back(e.c);
            out.val.push_back(e.v);
        }
        return out;
    }
};

/// Precomputed matrix-free Lindblad generator. All writes in apply() target
/// columns in [c0, c1) only, so threads own disjoint column slabs and the
/// accumulation order is independent of the thread count.
struct Liouvillian {
    int d = 0;
    bool have_h = false;
    Entries h;
    std::vector<Entries> jumps;  // entries sorted by row
    bool s_is_diagonal = true;
    Eigen::VectorXd s_diag;
    Entries s_general;

    void build(const std::optional<LinOp>& hamiltonian, const std::vector<LinOp>& collapses,
               const BasisPtr& basis) {
        d = basis->dim();
        if (hamiltonian) {
            LinOp::check_same_basis(*hamiltonian, LinOp::zero(basis));
            if (!hamiltonian->is_hermitian(1e-10))
                throw std::invalid_argument("evolve: Hamiltonian is not Hermitian");
            h = Entries::from(hamiltonian->matrix(), false);
            have_h = h.size() > 0;
        }
        SpMat s_sum(d, d);
        for (const auto& c : collapses) {
            if (!(*c.basis() == *basis))
                throw std::invalid_argument("evolve: collapse operator on a different basis");
            if (c.nnz() == 0) continue;
            jumps.push_back(Entries::from(c.matrix(), true));
            s_sum += SpMat(c.matrix().adjoint()) * c.matrix();
        }
        s_sum.prune(cxd(0, 0));
        s_is_diagonal = true;
        for (int outer = 0; outer < s_sum.outerSize() && s_is_diagonal; ++outer)
            for (SpMat::InnerIterator it(s_sum, outer); it; ++it)
                if (it.row() != it.col()) { s_is_diagonal = false; break; }
        if (s_is_diagonal) {
            s_diag = Eigen::VectorXd::Zero(d);
            for (int outer = 0; outer < s_sum.outerSize(); ++outer)
                for (SpMat::InnerIterator it(s_sum, outer); it; ++it)
                    s_diag[it.row()] = it.value().real();
        } else {
            s_general = Entries::from(s_sum, false);
        }
    }

    void apply_slab(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, int c0, int c1) const {
        const cxd* rho_data = rho.data();
        cxd* out_data = out.data();
        const auto col_ptr = [&](const cxd* base, int j) { return base + static_cast<size_t>(j) * d; };

        // Anticommutator term writes the slab first; everything else accumulates.
        if (s_is_diagonal && s_diag.size() > 0) {
            const double* s = s_diag.data();
            for (int j = c0; j < c1; ++j) {
                const double sj = s[j];
                const cxd* rcol = col_ptr(rho_data, j);
                cxd* ocol = const_cast<cxd*>(col_ptr(out_data, j));
                for (int i = 0; i < d; ++i) ocol[i] = -0.5 * (s[i] + sj) * rcol[i];
            }
        } else {
            for (int j = c0; j < c1; ++j)
                std::fill(out_data + static_cast<size_t>(j) * d,
                          out_data + static_cast<size_t>(j + 1) * d, cxd(0, 0));
        }

        // Jump terms: out(ra, rb) += v_a conj(v_b) rho(ca, cb).
        for (const auto& jm : jumps) {
            const int n = jm.size();
            const int b_lo = static_cast<int>(std::lower_bound(jm.row.begin(), jm.row.end(), c0) - jm.row.begin());
            for (int b = b_lo; b < n && jm.row[b] < c1; ++b) {
                const cxd cvb = std::conj(jm.val[b]);
                const cxd* rcol = col_ptr(rho_data, jm.col[b]);
                cxd* ocol = const_cast<cxd*>(col_ptr(out_data, jm.row[b]));
                for (int a = 0; a < n; ++a)
                    ocol[jm.row[a]] += jm.val[a] * cvb * rcol[jm.col[a]];
            }
        }

        // -i (H rho - rho H).
        if (have_h) {
            const int n = h.size();
            for (int j = c0; j < c1; ++j) {
                const cxd* rcol = col_ptr(rho_data, j);
                cxd* ocol = const_cast<cxd*>(col_ptr(out_data, j));
                for (int e = 0; e < n; ++e)
                    ocol[h.row[e]] += cxd(0, -1) * h.val[e] * rcol[h.col[e]];
            }
            for (int e = 0; e < n; ++e) {
                const int c = h.col[e];
                if (c < c0 || c >= c1) continue;
                const cxd f = cxd(0, 1) * h.val[e];
                const cxd* rcol = col_ptr(rho_data, h.row[e]);
                cxd* ocol = const_cast<cxd*>(col_ptr(out_data, c));
                for (int i = 0; i < d; ++i) ocol[i] += f * rcol[i];
            }
        }

        // -1/2 {S, rho} general fallback (diagonal handled up front).
        if (!s_is_diagonal) {
            const int n = s_general.size();
            for (int j = c0; j < c1; ++j) {
                const cxd* rcol = col_ptr(rho_data, j);
                cxd* ocol = const_cast<cxd*>(col_ptr(out_data, j));
                for (int e = 0; e < n; ++e)
                    ocol[s_general.row[e]] -= 0.5 * s_general.val[e] * rcol[s_general.col[e]];
            }
            for (int e = 0; e < n; ++e) {
                const int c = s_general.col[e];
                if (c < c0 || c >= c1) continue;
                const cxd f = -0.5 * s_general.val[e];
                const cxd* rcol = col_ptr(rho_data, s_general.row[e]);
                cxd* ocol = const_cast<cxd*>(col_ptr(out_data, c));
                for (int i = 0; i < d; ++i) ocol[i] += f * rcol[i];
            }
        }
    }

    void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
#ifdef _OPENMP
#pragma omp parallel
        {
            const int nt = omp_get_num_threads();
            const int tid = omp_get_thread_num();
            const int chunk = (d + nt - 1) / nt;
            const int c0 = std::min(d, tid * chunk);
            const int c1 = std::min(d, c0 + chunk);
            if (c0 < c1) apply_slab(rho, out, c0, c1);
        }
#else
        apply_slab(rho, out, 0, d);
#endif
    }
};

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695, E4 = B4 - 393.0 / 640,
                 E5 = B5 + 92097.0 / 339200, E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;

/// ytmp = y + h (a1 k1 + ... ), parallelized over the flat storage.
template <int N>
void stage_combo(Eigen::MatrixXcd& out, const Eigen::MatrixXcd& y, double h,
                 const std::array<double, N>& coef,
                 const std::array<const Eigen::MatrixXcd*, N>& ks) {
    const size_t n = static_cast<size_t>(y.size());
    cxd* po = out.data();
    const cxd* py = y.data();
    std::array<const cxd*, N> pk;
    for (int j = 0; j < N; ++j) pk[j] = ks[j]->data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        cxd acc = coef[0] * pk[0][i];
        for (int j = 1; j < N; ++j) acc += coef[j] * pk[j][i];
        po[i] = py[i] + h * acc;
    }
}

/// Weighted RMS of the embedded error estimate h sum Ei ki, evaluated in a
/// single read-only memory pass.
double embedded_error_norm(const Eigen::MatrixXcd& y, const Eigen::MatrixXcd& ynew,
                           const Eigen::MatrixXcd& k1, const Eigen::MatrixXcd& k3,
                           const Eigen::MatrixXcd& k4, const Eigen::MatrixXcd& k5,
                           const Eigen::MatrixXcd& k6, const Eigen::MatrixXcd& k7, double h,
                           double rtol, double atol) {
    const int d = static_cast<int>(y.rows());
    const cxd* py = y.data();
    const cxd* pn = ynew.data();
    const cxd* p1 = k1.data();
    const cxd* p3 = k3.data();
    const cxd* p4 = k4.data();
    const cxd* p5 = k5.data();
    const cxd* p6 = k6.data();
    const cxd* p7 = k7.data();
    // Per-column partial sums accumulated in a fixed order and reduced
    // sequentially, so the result is independent of the thread count.
    std::vector<double> col_acc(d, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < d; ++j) {
        const size_t base = static_cast<size_t>(j) * d;
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            const size_t idx = base + i;
            const cxd er = h * (E1 * p1[idx] + E3 * p3[idx] + E4 * p4[idx] + E5 * p5[idx] +
                                E6 * p6[idx] + E7 * p7[idx]);
            const double sc = atol + rtol * std::max(std::abs(py[idx]), std::abs(pn[idx]));
            const double q = std::abs(er) / sc;
            acc += q * q;
        }
        col_acc[j] = acc;
    }
    double total = 0.0;
    for (int j = 0; j < d; ++j) total += col_acc[j];
    return std::sqrt(total / (static_cast<double>(d) * d));
}

}  // namespace

EvolveResult evolve(const std::optional<LinOp>& hamiltonian,
                    const std::vector<LinOp>& collapses,
                    const DensityOp& rho0,
                    double t0, double t1,
                    const std::vector<double>& sample_times,
                    const std::vector<Observable>& observables,
                    const SolverOptions& opts) {
    if (t1 < t0) throw std::invalid_argument("evolve: t1 < t0");
    const BasisPtr basis = rho0.basis();
    const int d = basis->dim();

    Liouvillian gen;
    gen.build(hamiltonian, collapses, basis);

    // Stop list: sample times plus checkpoint times, strictly inside (t0, t1].
    std::vector<double> samples = sample_times;
    if (samples.empty()) samples = {t1};
    for (size_t i = 0; i < samples.size(); ++i) {
        if (samples[i] < t0 - 1e-12 || samples[i] > t1 + 1e-12)
            throw std::invalid_argument("evolve: sample time outside span");
        if (i > 0 && samples[i] <= samples[i - 1])
            throw std::invalid_argument("evolve: sample times must be increasing");
    }
    std::vector<double> stops = samples;
    for (double tc : opts.checkpoint_times) stops.push_back(tc);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                stops.end());

    EvolveResult result;
    result.series.columns.reserve(observables.size());
    for (const auto& ob : observables) result.series.columns.push_back(ob.name);

    auto record_sample = [&](double t, const Eigen::MatrixXcd& y) {
        DensityOp snap(basis, y);
        std::vector<double> row(observables.size());
        for (size_t k = 0; k < observables.size(); ++k) row[k] = observables[k].eval(snap);
        result.series.append(t, row);
    };
    auto maybe_checkpoint = [&](double t, const Eigen::MatrixXcd& y) {
        for (double tc : opts.checkpoint_times)
            if (std::abs(tc - t) < 1e-12) {
                result.checkpoint_times.push_back(t);
                result.checkpoints.emplace_back(basis, y);
            }
    };

    Eigen::MatrixXcd y = rho0.matrix();
    Eigen::MatrixXcd k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d);
    Eigen::MatrixXcd ytmp(d, d), ynew(d, d);

    SolverStats& stats = result.stats;
    stats.min_step = std::numeric_limits<double>::infinity();
    const double inv_tol = 10.0 * (opts.rtol + opts.atol);

    double t = t0;
    size_t next_stop = 0;

    // Points exactly at t0.
    auto is_stop = [&](double tt) { return next_stop < stops.size() && std::abs(stops[next_stop] - tt) < 1e-14; };
    if (is_stop(t)) {
        for (double ts : samples)
            if (std::abs(ts - t) < 1e-14) record_sample(t, y);
        maybe_checkpoint(t, y);
        ++next_stop;
    }

    if (t1 == t0) {
        result.final_state = DensityOp(basis, y);
        return result;
    }

    gen.apply(y, k1);
    ++stats.rhs_evals;

    // Initial step heuristic.
    double h = opts.first_step;
    if (h <= 0.0) {
        const double d0 = std::max(y.norm() / d, 1e-8);
        const double d1 = std::max(k1.norm() / d, 1e-12);
        h = std::min(0.01 * d0 / d1, (t1 - t0) * 0.1);
        if (!(h > 0) || !std::isfinite(h)) h = (t1 - t0) * 1e-6;
    }
    if (opts.max_step > 0) h = std::min(h, opts.max_step);

    // FSAL: k1 always holds f(y); rejection leaves y (and k1) untouched, and
    // the post-step hermitization perturbs y below the local error scale.
    while (t < t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
        if (next_stop < stops.size()) h = std::min(h, stops[next_stop] - t);
        h = std::min(h, t1 - t);
        if (opts.max_step > 0) h = std::min(h, opts.max_step);
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
            throw SolverError("evolve: step size underflow at t = " + std::to_string(t));

        stage_combo<1>(ytmp, y, h, {A21}, {&k1});
        gen.apply(ytmp, k2);
        stage_combo<2>(ytmp, y, h, {A31, A32}, {&k1, &k2});
        gen.apply(ytmp, k3);
        stage_combo<3>(ytmp, y, h, {A41, A42, A43}, {&k1, &k2, &k3});
        gen.apply(ytmp, k4);
        stage_combo<4>(ytmp, y, h, {A51, A52, A53, A54}, {&k1, &k2, &k3, &k4});
        gen.apply(ytmp, k5);
        stage_combo<5>(ytmp, y, h, {A61, A62, A63, A64, A65}, {&k1, &k2, &k3, &k4, &k5});
        gen.apply(ytmp, k6);
        stage_combo<5>(ynew, y, h, {B1, B3, B4, B5, B6}, {&k1, &k3, &k4, &k5, &k6});
        gen.apply(ynew, k7);
        stats.rhs_evals += 6;

        const double en = embedded_error_norm(y, ynew, k1, k3, k4, k5, k6, k7, h, opts.rtol,
                                              opts.atol);

        if (en <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            ++stats.steps_accepted;
            stats.min_step = std::min(stats.min_step, h);

            const double tr_drift = std::abs(y.trace().real() - 1.0);
            stats.max_trace_drift = std::max(stats.max_trace_drift, tr_drift);
            if (tr_drift > inv_tol)
                throw SolverError("evolve: trace drift " + std::to_string(tr_drift) +
                                  " beyond 10x tolerance at t = " + std::to_string(t));
            const bool at_stop =
                next_stop < stops.size() && std::abs(stops[next_stop] - t) < 1e-12;
            const bool last_step = t >= t1 - 1e-14 * std::max(1.0, std::abs(t1));
            // Re-symmetrization every few steps suppresses drift; stops and the
            // final state always get a clean Hermitian matrix.
            if (opts.hermitize && (at_stop || last_step || stats.steps_accepted % 8 == 0)) {
                double herm = 0.0;
                for (int j = 0; j < d; ++j)
                    for (int i = j + 1; i < d; ++i) {
                        const cxd a = y(i, j), b = std::conj(y(j, i));
                        herm = std::max(herm, std::abs(a - b));
                        const cxd m = 0.5 * (a + b);
                        y(i, j) = m;
                        y(j, i) = std::conj(m);
                    }
                for (int i = 0; i < d; ++i) y(i, i) = cxd(y(i, i).real(), 0.0);
                stats.max_herm_drift = std::max(stats.max_herm_drift, herm);
                if (herm > inv_tol)
                    throw SolverError("evolve: hermiticity drift beyond 10x tolerance at t = " +
                                      std::to_string(t));
            }

            while (next_stop < stops.size() && std::abs(stops[next_stop] - t) < 1e-12) {
                for (double ts : samples)
                    if (std::abs(ts - stops[next_stop]) < 1e-14) record_sample(t, y);
                maybe_checkpoint(t, y);
                ++next_stop;
            }

            const double f = (en > 0) ? 0.9 * std::pow(en, -0.2) : 5.0;
            h *= std::clamp(f, 0.2, 5.0);
        } else {
            ++stats.steps_rejected;
            const double f = 0.9 * std::pow(en, -0.2);
            h *= std::clamp(f, 0.1, 0.9);
            // y is unchanged, so k1 = f(y) stays valid.
        }
    }

    result.final_state = DensityOp(basis, std::move(y));
    return result;
}

DensityOp apply_unitary(const DensityOp& rho, const LinOp& u) {
    if (!(*u.basis() == *rho.basis()))
        throw std::invalid_argument("apply_unitary: basis mismatch");
    if (!u.is_unitary(1e-10))
        throw std::invalid_argument("apply_unitary: operator is not unitary");
    Eigen::MatrixXcd out = u.matrix() * rho.matrix() * u.matrix().adjoint();
    return DensityOp(rho.basis(), std::move(out));
}

DensityOp evolve_unitary_exact(const DensityOp& rho, const LinOp& hamiltonian, double duration) {
    return apply_unitary(rho, expm_unitary(hamiltonian, duration));
}

DensityOp evolve_pulse(const LinOp& hamiltonian, const std::vector<LinOp>& collapses,
                       const DensityOp& rho0, double duration, const SolverOptions& opts) {
    auto res = evolve(hamiltonian, collapses, rho0, 0.0, duration, {duration}, {}, opts);
    return res.final_state;
}

DensityOp reset_mode_to_vacuum(const DensityOp& rho, int mode) {
    const RotorBasis& b = *rho.basis();
    if (mode < 0 || mode >= b.n_modes())
        throw std::invalid_argument("reset_mode_to_vacuum: bad mode index");
    const int d = b.dim();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    // out[(i with n_k=0)][(j with n_k=0)] = sum_n rho[(i, n_k=n)][(j, n_k=n)]
    std::vector<int> zeroed(d), occ(d);
    for (int i = 0; i < d; ++i) {
        auto lab = b.label(i);
        occ[i] = lab.ns[mode];
        auto ns = lab.ns;
        ns[mode] = 0;
        zeroed[i] = b.index(lab.J, lab.m, ns);
    }
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            if (occ[i] == occ[j]) out(zeroed[i], zeroed[j]) += rho.matrix()(i, j);
    return DensityOp(rho.basis(), std::move(out));
}

}  // namespace rotorqec
