#include "degstein/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "degstein/graph.hpp"
#include "degstein/moments.hpp"
#include "degstein/normal.hpp"
#include "degstein/rng.hpp"
#include "degstein/util.hpp"

namespace degstein {

namespace {

// stream-domain tags so different operations never share substreams
constexpr std::uint64_t kRateTag = 0x72617465;
constexpr std::uint64_t kAuditTag = 0x61756469;
constexpr std::int64_t kChunk = 4096;
constexpr int kPsiBatches = 25;

struct Cell {
    int n;
    double theta;
    int d;
};

std::vector<Cell> feasible_cells(const SweepConfig& cfg, int min_n_over_d,
                                 std::vector<std::string>& skipped) {
    std::vector<Cell> cells;
    for (int d : cfg.d_list)
        for (double theta : cfg.theta_grid)
            for (int n : cfg.n_grid) {
                std::string reason;
                if (n < d + min_n_over_d)
                    reason = "n too small for d";
                else if (!(theta > 0.0) || !(theta < n - 1))
                    reason = "theta outside (0, n-1)";
                else if (theta > cfg.b)
                    reason = "theta above cap b";
                if (reason.empty())
                    cells.push_back(Cell{n, theta, d});
                else
                    skipped.push_back("cell n=" + std::to_string(n) +
                                      " theta=" + std::to_string(theta) +
                                      " d=" + std::to_string(d) + ": " + reason);
            }
    return cells;
}

double fit_slope(const std::vector<double>& log_n, const std::vector<double>& log_v,
                 double& intercept) {
    const std::size_t m = log_n.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += log_n[i];
        my += log_v[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (log_n[i] - mx) * (log_n[i] - mx);
        sxy += (log_n[i] - mx) * (log_v[i] - my);
    }
    const double slope = sxy / sxx;
    intercept = my - slope * mx;
    return slope;
}

double psi_from_bins(const std::vector<std::int64_t>& count,
                     const std::vector<double>& diff_sum, std::int64_t total,
                     bool* degenerate = nullptr) {
    int distinct = 0;
    for (std::int64_t c : count) distinct += (c > 0);
    if (degenerate) *degenerate = distinct < 2;
    double mean = 0.0;
    for (std::size_t y = 0; y < count.size(); ++y) mean += diff_sum[y];
    mean /= static_cast<double>(total);
    double var = 0.0;
    for (std::size_t y = 0; y < count.size(); ++y) {
        if (count[y] == 0) continue;
        const double w = static_cast<double>(count[y]) / static_cast<double>(total);
        const double m = diff_sum[y] / static_cast<double>(count[y]);
        var += w * m * m;
    }
    var -= mean * mean;
    return std::sqrt(std::max(0.0, var));
}

}  // namespace

void SweepConfig::validate() const {
    if (n_grid.empty() || theta_grid.empty() || d_list.empty())
        throw std::invalid_argument("sweep grids must be nonempty");
    if (samples < kMinSamples)
        throw std::invalid_argument("samples below minimum (" + std::to_string(kMinSamples) +
                                    ")");
    if (!(b > 0.0)) throw std::invalid_argument("cap b must be positive");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    for (int d : d_list)
        if (d < 1) throw std::invalid_argument("d must be a positive integer");
}

std::pair<double, double> estimate_kolmogorov(std::vector<double> samples, double alpha) {
    if (samples.empty()) throw std::invalid_argument("estimate_kolmogorov needs samples");
    std::sort(samples.begin(), samples.end());
    const auto m = static_cast<double>(samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double target = norm_cdf(samples[i]);
        worst = std::max(worst, std::fabs(static_cast<double>(i + 1) / m - target));
        worst = std::max(worst, std::fabs(static_cast<double>(i) / m - target));
    }
    const double halfwidth = std::sqrt(std::log(2.0 / alpha) / (2.0 * m));
    return {worst, halfwidth};
}

double estimate_wasserstein(std::vector<double> samples) {
    return estimate_wasserstein_with_se(std::move(samples)).first;
}

std::pair<double, double> estimate_wasserstein_with_se(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("estimate_wasserstein needs samples");
    std::sort(samples.begin(), samples.end());
    const auto m = static_cast<double>(samples.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double gap =
            std::fabs(samples[i] - norm_quantile((static_cast<double>(i) + 0.5) / m));
        sum += gap;
        sum_sq += gap * gap;
    }
    const double mean = sum / m;
    const double var = std::max(0.0, sum_sq / m - mean * mean);
    return {mean, std::sqrt(var / m)};
}

PsiEstimate estimate_psi_binned(const std::vector<CoupledDraw>& draws) {
    if (draws.empty()) throw std::invalid_argument("estimate_psi_binned needs draws");
    int max_y = 0;
    for (const auto& d : draws) max_y = std::max(max_y, d.y);
    std::vector<std::int64_t> count(static_cast<std::size_t>(max_y) + 1, 0);
    std::vector<double> diff_sum(static_cast<std::size_t>(max_y) + 1, 0.0);
    for (const auto& d : draws) {
        ++count[static_cast<std::size_t>(d.y)];
        diff_sum[static_cast<std::size_t>(d.y)] += d.y_s - d.y;
    }
    PsiEstimate est;
    est.value = psi_from_bins(count, diff_sum, static_cast<std::int64_t>(draws.size()),
                              &est.degenerate);
    return est;
}

RateReport rate_sweep(const SweepConfig& cfg) {
    cfg.validate();
    RateReport report;
    const std::vector<Cell> cells = feasible_cells(cfg, 1, report.skipped);
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        const ModelParams params = ModelParams::checked(cell.n, cell.d, cell.theta, cfg.b);
        const MomentSet ms = moment_set(params);
        const double sigma = std::sqrt(ms.sigma2);
        std::vector<double> w(static_cast<std::size_t>(cfg.samples));
        parallel_chunks(cfg.samples, kChunk, cfg.threads,
                        [&](std::int64_t lo, std::int64_t hi, std::int64_t) {
                            thread_local GraphSample scratch;
                            for (std::int64_t i = lo; i < hi; ++i) {
                                RandomStream rs(cfg.seed,
                                                {kRateTag, static_cast<std::uint64_t>(ci),
                                                 static_cast<std::uint64_t>(i)});
                                sample_auto_into(params, rs, scratch);
                                const int y = count_degree(scratch, params.d);
                                w[static_cast<std::size_t>(i)] = (y - ms.mu) / sigma;
                            }
                        });
        const auto [stat, halfwidth] = estimate_kolmogorov(std::move(w));
        report.cells.push_back(RateCell{cell.n, cell.theta, cell.d, cfg.samples, stat,
                                        halfwidth, ms.r, stat * ms.r});
    }
    // one slope fit per (theta, d) over its n-grid
    for (int d : cfg.d_list) {
        for (double theta : cfg.theta_grid) {
            std::vector<double> log_n;
            std::vector<double> log_v;
            double c_hat = 0.0;
            for (const auto& cell : report.cells) {
                if (cell.d != d || cell.theta != theta) continue;
                log_n.push_back(std::log(static_cast<double>(cell.n)));
                log_v.push_back(std::log(cell.kolmogorov));
                c_hat = std::max(c_hat, cell.product);
            }
            if (log_n.size() < 2) continue;
            double intercept = 0.0;
            const double slope = fit_slope(log_n, log_v, intercept);
            report.fits.push_back(RateFit{theta, d, slope, intercept, c_hat});
        }
    }
    return report;
}

AuditReport condition_audit(const SweepConfig& cfg) {
    cfg.validate();
    AuditReport report;
    // coupled draws need the reduced problem, hence n >= d+2
    const std::vector<Cell> cells = feasible_cells(cfg, 2, report.skipped);
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        const ModelParams params = ModelParams::checked(cell.n, cell.d, cell.theta, cfg.b);
        const MomentSet ms = moment_set(params);
        const double sigma = std::sqrt(ms.sigma2);
        const std::int64_t m = cfg.samples;
        const std::int64_t n_chunks = (m + kChunk - 1) / kChunk;

        struct ChunkSums {
            double k2 = 0, k4 = 0, k2w = 0, k2b = 0, b2 = 0, k2_lother = 0;
            std::int64_t violations = 0;
            std::vector<std::int64_t> y_count;
            std::vector<double> y_diff;
        };
        std::vector<ChunkSums> partial(static_cast<std::size_t>(n_chunks));
        std::vector<double> w(static_cast<std::size_t>(m));
        const std::size_t bins = static_cast<std::size_t>(cell.n) + 1;

        parallel_chunks(m, kChunk, cfg.threads,
                        [&](std::int64_t lo, std::int64_t hi, std::int64_t chunk) {
                            ChunkSums& s = partial[static_cast<std::size_t>(chunk)];
                            s.y_count.assign(bins, 0);
                            s.y_diff.assign(bins, 0.0);
                            for (std::int64_t i = lo; i < hi; ++i) {
                                RandomStream rs(cfg.seed,
                                                {kAuditTag, static_cast<std::uint64_t>(ci),
                                                 static_cast<std::uint64_t>(i)});
                                const CoupledDraw draw = coupled_draw(params, rs);
                                const double k2 =
                                    static_cast<double>(draw.k) * static_cast<double>(draw.k);
                                const double wi = (draw.y - ms.mu) / sigma;
                                w[static_cast<std::size_t>(i)] = wi;
                                s.k2 += k2;
                                s.k4 += k2 * k2;
                                s.k2w += (1.0 + std::fabs(wi)) * k2;
                                s.k2b += k2 * draw.b;
                                s.b2 += static_cast<double>(draw.b) * draw.b;
                                s.k2_lother += k2 * (draw.l == 1 ? 0.0 : 1.0);
                                ++s.y_count[static_cast<std::size_t>(draw.y)];
                                s.y_diff[static_cast<std::size_t>(draw.y)] +=
                                    draw.y_s - draw.y;
                                const int edit_bound = 1 + std::abs(params.d - draw.deg_chosen);
                                const bool ok =
                                    std::abs(draw.y_s - draw.y) <= edit_bound &&
                                    edit_bound <= draw.k &&
                                    std::abs(draw.y - draw.v_reduced) <= 1 + draw.deg_chosen &&
                                    1 + draw.deg_chosen <= draw.k;
                                if (!ok) ++s.violations;
                            }
                        });

        // merge chunks in index order (deterministic for any thread count)
        KahanSum k2, k4, k2w, k2b, b2, k2_lother;
        std::int64_t violations = 0;
        std::vector<std::int64_t> y_count(bins, 0);
        std::vector<double> y_diff(bins, 0.0);
        for (const auto& s : partial) {
            k2.add(s.k2);
            k4.add(s.k4);
            k2w.add(s.k2w);
            k2b.add(s.k2b);
            b2.add(s.b2);
            k2_lother.add(s.k2_lother);
            violations += s.violations;
            for (std::size_t y = 0; y < bins; ++y) {
                y_count[y] += s.y_count[y];
                y_diff[y] += s.y_diff[y];
            }
        }
        const auto md = static_cast<double>(m);
        AuditCell out;
        out.n = cell.n;
        out.theta = cell.theta;
        out.d = cell.d;
        out.samples = m;
        out.k2_hat = k2.value() / md;
        out.k4_hat = k4.value() / md;
        out.k2w_hat = k2w.value() / md;
        out.k2b_hat = k2b.value() / md;
        out.b2_hat = b2.value() / md;
        out.psi_hat = psi_from_bins(y_count, y_diff, m);

        // batch-means SE for psi_hat over contiguous chunk groups
        {
            std::vector<double> batch_psi;
            const std::int64_t per_batch = (n_chunks + kPsiBatches - 1) / kPsiBatches;
            for (std::int64_t b0 = 0; b0 < n_chunks; b0 += per_batch) {
                std::vector<std::int64_t> cnt(bins, 0);
                std::vector<double> dif(bins, 0.0);
                std::int64_t total = 0;
                for (std::int64_t c = b0; c < std::min(n_chunks, b0 + per_batch); ++c) {
                    const auto& s = partial[static_cast<std::size_t>(c)];
                    for (std::size_t y = 0; y < bins; ++y) {
                        cnt[y] += s.y_count[y];
                        dif[y] += s.y_diff[y];
                        total += s.y_count[y];
                    }
                }
                if (total > 0) batch_psi.push_back(psi_from_bins(cnt, dif, total));
            }
            double mean = 0.0;
            for (double v : batch_psi) mean += v;
            mean /= static_cast<double>(batch_psi.size());
            double var = 0.0;
            for (double v : batch_psi) var += (v - mean) * (v - mean);
            var /= std::max<std::size_t>(1, batch_psi.size() - 1);
            out.psi_se = std::sqrt(var / static_cast<double>(batch_psi.size()));
        }

        const double mu = ms.mu;
        const double s2 = ms.sigma2;
        const double s3 = s2 * sigma;
        const double s4 = s2 * s2;
        out.q1 = ms.r * mu * out.psi_hat / s2;
        out.q2 = ms.r * mu * out.k2w_hat / s3;
        out.q3 = ms.r * ms.r * mu * (k2_lother.value() / md) / s3;
        out.q4 = ms.r * ms.r * mu * out.k2b_hat / s4;
        out.suff_k4 = ms.r * mu * std::sqrt(out.k4_hat) / s3;
        out.suff_k4b2 = ms.r * ms.r * mu * std::sqrt(out.k4_hat) * std::sqrt(out.b2_hat) / s4;
        out.wasserstein_bound = 0.8 * mu * out.psi_hat / s2 + mu * out.k2_hat / s3;
        const auto [wh, wse] = estimate_wasserstein_with_se(w);
        out.wasserstein_hat = wh;
        out.wasserstein_se = wse;
        out.t_mass_l1 = (k2.value() - k2_lother.value()) / k2.value();
        const ModelParams reduced =
            ModelParams::checked(cell.n - 1, cell.d, *ms.psi, cfg.b);
        const MomentSet ms_red = moment_set(reduced);
        out.sigma2_ratio = ms.sigma2 / ms_red.sigma2;
        out.r_ratio = ms.r / ms_red.r;
        out.coupling_violations = violations;
        report.cells.push_back(out);
    }

    // boundedness verdicts per (theta, d): compare maxima of the two n-halves
    for (int d : cfg.d_list) {
        for (double theta : cfg.theta_grid) {
            std::vector<const AuditCell*> group;
            for (const auto& c : report.cells)
                if (c.d == d && c.theta == theta) group.push_back(&c);
            if (group.size() < 2) continue;
            std::sort(group.begin(), group.end(),
                      [](const AuditCell* a, const AuditCell* b) { return a->n < b->n; });
            const std::size_t half = group.size() / 2;
            const auto verdict = [&](double AuditCell::* field) {
                double small_max = 0.0;
                double large_max = 0.0;
                for (std::size_t i = 0; i < half; ++i)
                    small_max = std::max(small_max, group[i]->*field);
                for (std::size_t i = group.size() - half; i < group.size(); ++i)
                    large_max = std::max(large_max, group[i]->*field);
                return large_max <= 2.0 * small_max;
            };
            report.verdicts.push_back(AuditVerdict{theta, d, verdict(&AuditCell::q1),
                                                   verdict(&AuditCell::q2),
                                                   verdict(&AuditCell::q4)});
        }
    }
    return report;
}

std::vector<RatioRow> ratio_convergence(double b, int d, const std::vector<int>& n_list,
                                        int grid_points) {
    if (!(b > 0.0)) throw std::invalid_argument("cap b must be positive");
    if (grid_points < 1) throw std::invalid_argument("grid_points must be >= 1");
    std::vector<RatioRow> rows;
    const auto dev = [](double ratio) {
        return std::max(std::fabs(ratio - 1.0), std::fabs(1.0 / ratio - 1.0));
    };
    for (int n : n_list) {
        RatioRow row{n, 0.0, 0.0, 0.0, 0.0};
        for (int i = 1; i <= grid_points; ++i) {
            const double theta = b * static_cast<double>(i) / grid_points;
            if (!(theta < n - 2)) continue;  // keep psi inside the reduced range too
            const ModelParams params = ModelParams::checked(n, d, theta, b);
            const MomentSet ms = moment_set(params);
            const ModelParams reduced = ModelParams::checked(n - 1, d, *ms.psi, b);
            const MomentSet ms_red = moment_set(reduced);
            row.tau_dev = std::max(row.tau_dev, dev(ms.tau_n / ms.tau));
            row.delta_dev = std::max(row.delta_dev, dev(ms.delta_n / ms.delta));
            row.r_dev = std::max(row.r_dev, dev(ms.r / ms_red.r));
            row.sigma2_dev = std::max(row.sigma2_dev, dev(ms.sigma2 / ms_red.sigma2));
        }
        rows.push_back(row);
    }
    return rows;
}

RecursionResult recursion_bound(const RecursionProblem& problem, int horizon) {
    if (!(problem.tau > 0.0 && problem.tau < 1.0))
        throw std::domain_error("tau must lie in (0, 1)");
    if (problem.forcing < 0.0) throw std::domain_error("forcing term must be nonnegative");
    if (problem.a_init.empty()) throw std::invalid_argument("a_init must be nonempty");
    if (problem.rows.empty()) throw std::invalid_argument("rows must be nonempty");
    const int n1 = static_cast<int>(problem.a_init.size()) - 1;
    if (horizon < n1) throw std::invalid_argument("horizon below initial segment");
    for (const auto& row : problem.rows) {
        double total = 0.0;
        for (double p : row) {
            if (p < 0.0) throw std::domain_error("row weights must be nonnegative");
            total += p;
        }
        if (total > problem.tau + 1e-12)
            throw std::domain_error("row sum exceeds tau");
    }

    RecursionResult result;
    result.a = problem.a_init;
    result.a.resize(static_cast<std::size_t>(horizon) + 1, 0.0);
    for (int n = n1 + 1; n <= horizon; ++n) {
        const auto& row = problem.rows.size() == 1
                              ? problem.rows.front()
                              : problem.rows.at(static_cast<std::size_t>(n - n1 - 1));
        double acc = problem.forcing;
        double p0 = 0.0;
        for (std::size_t l = 0; l < row.size(); ++l) {
            if (static_cast<int>(l) > n) break;
            if (l == 0) {
                p0 = row[l];
                continue;
            }
            acc += row[l] * result.a[static_cast<std::size_t>(n) - l];
        }
        result.a[static_cast<std::size_t>(n)] = acc / (1.0 - p0);
    }

    const double alpha = *std::max_element(problem.a_init.begin(), problem.a_init.end());
    const double a = problem.forcing / (1.0 - problem.tau);
    const double c = std::max(a, alpha * (1.0 - problem.tau));
    result.bound.assign(static_cast<std::size_t>(horizon) + 1, alpha);
    for (int n = n1; n < horizon; ++n)
        result.bound[static_cast<std::size_t>(n) + 1] =
            problem.tau * result.bound[static_cast<std::size_t>(n)] + c;
    result.supremum = c / (1.0 - problem.tau);
    return result;
}

}  // namespace degstein
