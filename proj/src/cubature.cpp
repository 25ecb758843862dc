#include "dotforge/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>
#include <thread>

namespace dotforge::cubature {

namespace {

struct Region {
    std::vector<double> center, half;
    double value = 0, error = 0;
    int split_dim = 0;
    long id = 0;
};

struct Rule {
    int n;
    double w1, w2, w3, w4, w5;     // degree-7 weights (relative to volume)
    double e1, e2, e3, e4;         // embedded degree-5 weights
    static constexpr double lam2 = 0.35856858280031809199; // sqrt(9/70)
    static constexpr double lam4 = 0.94868329805051379960; // sqrt(9/10)
    static constexpr double lam5 = 0.68824720161168529772; // sqrt(9/19)

    explicit Rule(int dim) : n(dim) {
        w1 = (12824.0 - 9120.0 * n + 400.0 * n * n) / 19683.0;
        w2 = 980.0 / 6561.0;
        w3 = (1820.0 - 400.0 * n) / 19683.0;
        w4 = 200.0 / 19683.0;
        w5 = 6859.0 / 19683.0 / double(1L << n);
        e1 = (729.0 - 950.0 * n + 50.0 * n * n) / 729.0;
        e2 = 245.0 / 486.0;
        e3 = (265.0 - 100.0 * n) / 1458.0;
        e4 = 25.0 / 729.0;
    }

    long points() const { return 1 + 4L * n + 2L * n * (n - 1) + (1L << n); }

    // evaluates both rules on the region; sets value, error, split_dim
    void apply(const Integrand& f, Region& r) const {
        std::vector<double> x(r.center);
        const double fc = f(x);
        double sum2 = 0, sum3 = 0, sum4 = 0, sum5 = 0;
        std::vector<double> divdiff(n);

        for (int i = 0; i < n; ++i) {
            const double h = r.half[i];
            x = r.center;
            x[i] = r.center[i] - lam2 * h;
            double f2a = f(x);
            x[i] = r.center[i] + lam2 * h;
            double f2b = f(x);
            x[i] = r.center[i] - lam4 * h;
            double f3a = f(x);
            x[i] = r.center[i] + lam4 * h;
            double f3b = f(x);
            sum2 += f2a + f2b;
            sum3 += f3a + f3b;
            // fourth divided difference along i steers the split choice
            divdiff[i] = std::abs(f2a + f2b - 2 * fc - (lam2 * lam2) / (lam4 * lam4) * (f3a + f3b - 2 * fc));
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int si = -1; si <= 1; si += 2)
                    for (int sj = -1; sj <= 1; sj += 2) {
                        x = r.center;
                        x[i] = r.center[i] + si * lam4 * r.half[i];
                        x[j] = r.center[j] + sj * lam4 * r.half[j];
                        sum4 += f(x);
                    }
        for (long corner = 0; corner < (1L << n); ++corner) {
            for (int i = 0; i < n; ++i)
                x[i] = r.center[i] + ((corner >> i) & 1 ? lam5 : -lam5) * r.half[i];
            sum5 += f(x);
        }

        double vol = 1.0;
        for (int i = 0; i < n; ++i) vol *= 2.0 * r.half[i];
        const double res7 = vol * (w1 * fc + w2 * sum2 + w3 * sum3 + w4 * sum4 + w5 * sum5);
        const double res5 = vol * (e1 * fc + e2 * sum2 + e3 * sum3 + e4 * sum4);
        r.value = res7;
        r.error = std::abs(res7 - res5); // non-finite values are detected by the caller

        int dim = 0;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            double score = divdiff[i];
            if (score > best * (1.0 + 1e-12) ||
                (std::abs(score - best) <= 1e-12 * std::abs(best) && r.half[i] > r.half[dim])) {
                best = score;
                dim = i;
            }
        }
        r.split_dim = dim;
    }
};

struct WorseError {
    bool operator()(const Region* a, const Region* b) const {
        if (a->error != b->error) return a->error < b->error;
        return a->id > b->id;
    }
};

void kahan_add(double& sum, double& comp, double term) {
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}

} // namespace

Result integrate(const Integrand& f, std::span<const double> lo, std::span<const double> hi,
                 const Options& opts) {
    const int n = static_cast<int>(lo.size());
    if (n < 2 || hi.size() != lo.size())
        throw std::invalid_argument("cubature::integrate: need matching bounds, dim >= 2");
    for (int i = 0; i < n; ++i)
        if (!(hi[i] > lo[i])) throw std::invalid_argument("cubature::integrate: empty box");

    const Rule rule(n);
    long evals = 0;
    long next_id = 0;

    std::vector<std::unique_ptr<Region>> store;
    auto make_region = [&](std::vector<double> c, std::vector<double> h) {
        auto r = std::make_unique<Region>();
        r->center = std::move(c);
        r->half = std::move(h);
        r->id = next_id++;
        return r;
    };

    {
        std::vector<double> c(n), h(n);
        for (int i = 0; i < n; ++i) {
            c[i] = 0.5 * (lo[i] + hi[i]);
            h[i] = 0.5 * (hi[i] - lo[i]);
        }
        auto r = make_region(std::move(c), std::move(h));
        rule.apply(f, *r);
        if (!std::isfinite(r->value))
            throw std::domain_error("cubature: integrand returned a non-finite value");
        evals += rule.points();
        store.push_back(std::move(r));
    }

    std::priority_queue<Region*, std::vector<Region*>, WorseError> heap;
    heap.push(store[0].get());

    auto totals = [&]() {
        double v = 0, vc = 0, e = 0, ec = 0;
        for (const auto& r : store) {
            kahan_add(v, vc, r->value);
            kahan_add(e, ec, r->error);
        }
        return std::pair{v, e};
    };

    // fixed batch width keeps the subdivision sequence independent of thread count
    constexpr int batch = 16;

    double tot_val = store[0]->value, tot_err = store[0]->error;
    while (tot_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(tot_val))) {
        if (evals + 2L * batch * rule.points() > opts.max_evals) break;

        std::vector<Region*> parents;
        while (!heap.empty() && (int)parents.size() < batch) {
            parents.push_back(heap.top());
            heap.pop();
        }
        if (parents.empty()) break;

        std::vector<Region*> children;
        for (Region* p : parents) {
            const int d = p->split_dim;
            std::vector<double> h = p->half;
            h[d] *= 0.5;
            std::vector<double> cl = p->center, cr = p->center;
            cl[d] -= h[d];
            cr[d] += h[d];
            // the parent slot is reused by its left child to keep `store` compact
            double old_v = p->value, old_e = p->error;
            p->center = cl;
            p->half = h;
            store.push_back(make_region(std::move(cr), h));
            children.push_back(p);
            children.push_back(store.back().get());
            tot_val -= old_v;
            tot_err -= old_e;
        }

        auto eval_range = [&](size_t b, size_t e) {
            for (size_t i = b; i < e; ++i) rule.apply(f, *children[i]);
        };
        const int nthreads = std::max(1, std::min<int>(opts.threads, (int)children.size()));
        if (nthreads == 1) {
            eval_range(0, children.size());
        } else {
            std::vector<std::thread> pool;
            size_t per = (children.size() + nthreads - 1) / nthreads;
            for (int t = 0; t < nthreads; ++t) {
                size_t b = t * per, e = std::min(children.size(), b + per);
                if (b < e) pool.emplace_back(eval_range, b, e);
            }
            for (auto& th : pool) th.join();
        }
        evals += (long)children.size() * rule.points();
        for (Region* c : children) {
            if (!std::isfinite(c->value))
                throw std::domain_error("cubature: integrand returned a non-finite value");
            tot_val += c->value;
            tot_err += c->error;
            heap.push(c);
        }
    }

    auto [v, e] = totals(); // exact deterministic re-sum in region creation order
    Result res;
    res.value = v;
    res.error = e;
    res.evals = evals;
    res.regions = (int)store.size();
    res.converged = e <= std::max(opts.abs_tol, opts.rel_tol * std::abs(v));
    return res;
}

} // namespace dotforge::cubature
