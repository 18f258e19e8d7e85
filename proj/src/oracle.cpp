#include "degstein/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "degstein/normal.hpp"

namespace degstein {

namespace {

struct PairTable {
    int n;
    int m;  // C(n,2)
    std::vector<std::pair<int, int>> pairs;

    explicit PairTable(int n_in) : n(n_in), m(n_in * (n_in - 1) / 2) {
        pairs.reserve(static_cast<std::size_t>(m));
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    }
};

void degrees_of_mask(const PairTable& pt, std::uint32_t mask, std::vector<int>& deg) {
    deg.assign(static_cast<std::size_t>(pt.n), 0);
    for (int i = 0; i < pt.m; ++i) {
        if (mask >> i & 1u) {
            ++deg[static_cast<std::size_t>(pt.pairs[static_cast<std::size_t>(i)].first)];
            ++deg[static_cast<std::size_t>(pt.pairs[static_cast<std::size_t>(i)].second)];
        }
    }
}

// weights[e] = p^e (1-p)^(m-e)
std::vector<double> edge_weights(double p, int m) {
    std::vector<double> w(static_cast<std::size_t>(m) + 1);
    for (int e = 0; e <= m; ++e)
        w[static_cast<std::size_t>(e)] =
            std::pow(p, e) * std::pow(1.0 - p, m - e);
    return w;
}

std::vector<u128> edge_weights_rational(long a, long den, int m) {
    std::vector<u128> w(static_cast<std::size_t>(m) + 1);
    for (int e = 0; e <= m; ++e) {
        u128 v = 1;
        for (int i = 0; i < e; ++i) v *= static_cast<u128>(a);
        for (int i = 0; i < m - e; ++i) v *= static_cast<u128>(den - a);
        w[static_cast<std::size_t>(e)] = v;
    }
    return w;
}

u128 pow_u128(u128 base, int e) {
    u128 v = 1;
    for (int i = 0; i < e; ++i) v *= base;
    return v;
}

long long binom_small(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void check_enumeration_cap(const ModelParams& params, int cap, const char* what) {
    params.validate();
    if (params.n > cap)
        throw std::domain_error(std::string("n exceeds ") + what + " cap (" +
                                std::to_string(cap) + ")");
}

// Visits every k-combination of {0,...,count-1} as an index vector.
void for_each_combination(int count, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (k == 0) {
        fn(idx);
        return;
    }
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == count - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace

void ExactDist::validate() const {
    if (support.size() != probs.size()) throw std::logic_error("support/probs size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (probs[i] < -1e-15) throw std::logic_error("negative probability");
        if (i > 0 && support[i] <= support[i - 1])
            throw std::logic_error("support not strictly increasing");
        total += probs[i];
    }
    if (std::fabs(total - 1.0) > 1e-12) throw std::logic_error("pmf does not sum to 1");
}

double ExactDist::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) m += support[i] * probs[i];
    return m;
}

double ExactDist::variance() const {
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        const double c = support[i] - m;
        v += c * c * probs[i];
    }
    return v;
}

double ExactDist::prob_of(int y) const {
    const auto it = std::lower_bound(support.begin(), support.end(), y);
    if (it == support.end() || *it != y) return 0.0;
    return probs[static_cast<std::size_t>(it - support.begin())];
}

void RationalDist::reduce() {
    u128 g = den;
    for (u128 v : num) g = gcd_u128(g, v);
    if (g <= 1) return;
    den /= g;
    for (u128& v : num) v /= g;
}

ExactDist RationalDist::to_dist() const {
    ExactDist d;
    d.support = support;
    d.probs.reserve(num.size());
    for (u128 v : num)
        d.probs.push_back(static_cast<double>(v) / static_cast<double>(den));
    return d;
}

std::optional<std::pair<long, long>> small_rational_p(const ModelParams& params, long max_den) {
    const double p = params.p();
    for (long den = 1; den <= max_den; ++den) {
        const double scaled = p * static_cast<double>(den);
        const long a = std::lround(scaled);
        if (a <= 0 || a >= den) continue;
        if (std::fabs(p - static_cast<double>(a) / static_cast<double>(den)) <= 1e-12)
            return std::make_pair(a, den);
    }
    return std::nullopt;
}

ExactDist enumerate_count_law(const ModelParams& params) {
    check_enumeration_cap(params, kMaxEnumerationN, "enumeration");
    const PairTable pt(params.n);
    const auto w = edge_weights(params.p(), pt.m);
    std::vector<KahanSum> acc(static_cast<std::size_t>(params.n) + 1);
    std::vector<int> deg;
    for (std::uint32_t mask = 0; mask < (1u << pt.m); ++mask) {
        degrees_of_mask(pt, mask, deg);
        int y = 0;
        for (int x : deg) y += (x == params.d);
        acc[static_cast<std::size_t>(y)].add(w[static_cast<std::size_t>(__builtin_popcount(mask))]);
    }
    ExactDist out;
    for (int y = 0; y <= params.n; ++y) {
        if (acc[static_cast<std::size_t>(y)].value() > 0.0) {
            out.support.push_back(y);
            out.probs.push_back(acc[static_cast<std::size_t>(y)].value());
        }
    }
    out.validate();
    return out;
}

RationalDist enumerate_count_law_rational(const ModelParams& params) {
    check_enumeration_cap(params, kMaxEnumerationN, "enumeration");
    const auto frac = small_rational_p(params);
    if (!frac)
        throw std::domain_error("edge probability is not a small rational; no exact mode");
    const auto [a, den] = *frac;
    const PairTable pt(params.n);
    const auto w = edge_weights_rational(a, den, pt.m);
    std::vector<u128> acc(static_cast<std::size_t>(params.n) + 1, 0);
    std::vector<int> deg;
    for (std::uint32_t mask = 0; mask < (1u << pt.m); ++mask) {
        degrees_of_mask(pt, mask, deg);
        int y = 0;
        for (int x : deg) y += (x == params.d);
        acc[static_cast<std::size_t>(y)] += w[static_cast<std::size_t>(__builtin_popcount(mask))];
    }
    RationalDist out;
    out.den = pow_u128(static_cast<u128>(den), pt.m);
    for (int y = 0; y <= params.n; ++y) {
        if (acc[static_cast<std::size_t>(y)] != 0) {
            out.support.push_back(y);
            out.num.push_back(acc[static_cast<std::size_t>(y)]);
        }
    }
    out.reduce();
    return out;
}

ExactDist size_bias_transform(const ExactDist& dist) {
    const double mu = dist.mean();
    if (!(mu > 0.0)) throw std::domain_error("size_bias_transform requires positive mean");
    ExactDist out;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        if (dist.support[i] <= 0) continue;
        const double p = dist.support[i] * dist.probs[i] / mu;
        if (p > 0.0) {
            out.support.push_back(dist.support[i]);
            out.probs.push_back(p);
        }
    }
    out.validate();
    return out;
}

RationalDist size_bias_transform(const RationalDist& dist) {
    RationalDist out;
    u128 total = 0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        if (dist.support[i] <= 0) continue;
        const u128 w = static_cast<u128>(dist.support[i]) * dist.num[i];
        if (w != 0) {
            out.support.push_back(dist.support[i]);
            out.num.push_back(w);
            total += w;
        }
    }
    if (total == 0) throw std::domain_error("size_bias_transform requires positive mean");
    out.den = total;
    out.reduce();
    return out;
}

void for_each_coupling_outcome(const ModelParams& params,
                               const std::function<void(const CouplingOutcome&)>& visit) {
    check_enumeration_cap(params, kMaxJointN, "joint enumeration");
    const int n = params.n;
    const int d = params.d;
    const PairTable pt(n);
    const auto w = edge_weights(params.p(), pt.m);
    std::vector<int> deg;
    std::vector<bool> adj(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (std::uint32_t mask = 0; mask < (1u << pt.m); ++mask) {
        degrees_of_mask(pt, mask, deg);
        std::fill(adj.begin(), adj.end(), false);
        for (int i = 0; i < pt.m; ++i) {
            if (mask >> i & 1u) {
                const auto [u, v] = pt.pairs[static_cast<std::size_t>(i)];
                adj[static_cast<std::size_t>(u) * n + v] = true;
                adj[static_cast<std::size_t>(v) * n + u] = true;
            }
        }
        int y = 0;
        for (int x : deg) y += (x == d);
        const double pg = w[static_cast<std::size_t>(__builtin_popcount(mask))];
        for (int chosen = 0; chosen < n; ++chosen) {
            const int dv = deg[static_cast<std::size_t>(chosen)];
            int v_red = 0;
            for (int u = 0; u < n; ++u) {
                if (u == chosen) continue;
                v_red += (deg[static_cast<std::size_t>(u)] -
                          (adj[static_cast<std::size_t>(u) * n + chosen] ? 1 : 0)) == d;
            }
            std::vector<int> pool;
            int need = 0;
            if (dv > d) {
                need = dv - d;
                for (int u = 0; u < n; ++u)
                    if (u != chosen && adj[static_cast<std::size_t>(u) * n + chosen])
                        pool.push_back(u);
            } else if (dv < d) {
                need = d - dv;
                for (int u = 0; u < n; ++u)
                    if (u != chosen && !adj[static_cast<std::size_t>(u) * n + chosen])
                        pool.push_back(u);
            }
            const int delta = dv > d ? -1 : 1;
            const double w_choice =
                pg / n / static_cast<double>(binom_small(static_cast<int>(pool.size()), need));
            for_each_combination(
                static_cast<int>(pool.size()), need, [&](const std::vector<int>& idx) {
                    int y_s = y + 1 - (dv == d ? 1 : 0);
                    for (int j : idx) {
                        const int u = pool[static_cast<std::size_t>(j)];
                        const int du = deg[static_cast<std::size_t>(u)];
                        y_s += (du + delta == d) - (du == d);
                    }
                    visit(CouplingOutcome{y, y_s, dv, v_red, need, w_choice});
                });
        }
    }
}

JointLaw enumerate_coupling_joint(const ModelParams& params) {
    const int n = params.n;
    const std::size_t span = static_cast<std::size_t>(n) + 1;
    std::vector<KahanSum> acc(span * span * span * span);
    for_each_coupling_outcome(params, [&](const CouplingOutcome& o) {
        const std::size_t key =
            ((static_cast<std::size_t>(o.y) * span + static_cast<std::size_t>(o.y_s)) * span +
             static_cast<std::size_t>(o.deg)) *
                span +
            static_cast<std::size_t>(o.v);
        acc[key].add(o.prob);
    });
    JointLaw law;
    law.n = n;
    law.d = params.d;
    for (int y = 0; y <= n; ++y)
        for (int y_s = 0; y_s <= n; ++y_s)
            for (int dg = 0; dg <= n; ++dg)
                for (int v = 0; v <= n; ++v) {
                    const std::size_t key =
                        ((static_cast<std::size_t>(y) * span + static_cast<std::size_t>(y_s)) *
                             span +
                         static_cast<std::size_t>(dg)) *
                            span +
                        static_cast<std::size_t>(v);
                    if (acc[key].value() > 0.0)
                        law.atoms.push_back(JointAtom{y, y_s, dg, v, acc[key].value()});
                }
    return law;
}

RationalDist enumerate_ys_marginal_rational(const ModelParams& params) {
    check_enumeration_cap(params, kMaxJointN, "joint enumeration");
    const auto frac = small_rational_p(params);
    if (!frac)
        throw std::domain_error("edge probability is not a small rational; no exact mode");
    const auto [a, den] = *frac;
    const int n = params.n;
    const int d = params.d;
    const PairTable pt(n);
    const auto w = edge_weights_rational(a, den, pt.m);
    // common denominator: den^m * n * lcm of all achievable subset counts
    u128 lcm = 1;
    for (int pool = 0; pool <= n - 1; ++pool)
        for (int k = 0; k <= pool; ++k) {
            const u128 c = static_cast<u128>(binom_small(pool, k));
            lcm = lcm / gcd_u128(lcm, c) * c;
        }
    std::vector<u128> acc(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> deg;
    std::vector<bool> adj(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (std::uint32_t mask = 0; mask < (1u << pt.m); ++mask) {
        degrees_of_mask(pt, mask, deg);
        std::fill(adj.begin(), adj.end(), false);
        for (int i = 0; i < pt.m; ++i) {
            if (mask >> i & 1u) {
                const auto [u, v] = pt.pairs[static_cast<std::size_t>(i)];
                adj[static_cast<std::size_t>(u) * n + v] = true;
                adj[static_cast<std::size_t>(v) * n + u] = true;
            }
        }
        int y = 0;
        for (int x : deg) y += (x == d);
        const u128 pg = w[static_cast<std::size_t>(__builtin_popcount(mask))];
        for (int chosen = 0; chosen < n; ++chosen) {
            const int dv = deg[static_cast<std::size_t>(chosen)];
            std::vector<int> pool;
            int need = 0;
            if (dv > d) {
                need = dv - d;
                for (int u = 0; u < n; ++u)
                    if (u != chosen && adj[static_cast<std::size_t>(u) * n + chosen])
                        pool.push_back(u);
            } else if (dv < d) {
                need = d - dv;
                for (int u = 0; u < n; ++u)
                    if (u != chosen && !adj[static_cast<std::size_t>(u) * n + chosen])
                        pool.push_back(u);
            }
            const int delta = dv > d ? -1 : 1;
            const u128 w_choice =
                pg * (lcm / static_cast<u128>(
                                binom_small(static_cast<int>(pool.size()), need)));
            for_each_combination(
                static_cast<int>(pool.size()), need, [&](const std::vector<int>& idx) {
                    int y_s = y + 1 - (dv == d ? 1 : 0);
                    for (int j : idx) {
                        const int u = pool[static_cast<std::size_t>(j)];
                        const int du = deg[static_cast<std::size_t>(u)];
                        y_s += (du + delta == d) - (du == d);
                    }
                    acc[static_cast<std::size_t>(y_s)] += w_choice;
                });
        }
    }
    RationalDist out;
    out.den = pow_u128(static_cast<u128>(den), pt.m) * static_cast<u128>(n) * lcm;
    for (int y = 0; y <= n; ++y) {
        if (acc[static_cast<std::size_t>(y)] != 0) {
            out.support.push_back(y);
            out.num.push_back(acc[static_cast<std::size_t>(y)]);
        }
    }
    out.reduce();
    return out;
}

ExactDist JointLaw::marginal_y() const {
    std::map<int, double> m;
    for (const auto& a : atoms) m[a.y] += a.prob;
    ExactDist out;
    for (auto [y, p] : m) {
        out.support.push_back(y);
        out.probs.push_back(p);
    }
    out.validate();
    return out;
}

ExactDist JointLaw::marginal_ys() const {
    std::map<int, double> m;
    for (const auto& a : atoms) m[a.y_s] += a.prob;
    ExactDist out;
    for (auto [y, p] : m) {
        out.support.push_back(y);
        out.probs.push_back(p);
    }
    out.validate();
    return out;
}

double JointLaw::conditional_diff_mean(int y) const {
    double w = 0.0;
    double s = 0.0;
    for (const auto& a : atoms) {
        if (a.y != y) continue;
        w += a.prob;
        s += a.prob * (a.y_s - a.y);
    }
    if (!(w > 0.0)) throw std::domain_error("conditioning on a zero-probability Y value");
    return s / w;
}

double psi_from_joint(const JointLaw& joint) {
    std::map<int, std::pair<double, double>> bins;  // y -> (weight, weighted diff sum)
    for (const auto& a : joint.atoms) {
        auto& bin = bins[a.y];
        bin.first += a.prob;
        bin.second += a.prob * (a.y_s - a.y);
    }
    double mean = 0.0;
    for (auto& [y, bin] : bins) mean += bin.second;
    double var = 0.0;
    for (auto& [y, bin] : bins) {
        const double m = bin.second / bin.first;
        var += bin.first * m * m;
    }
    var -= mean * mean;
    return std::sqrt(std::max(0.0, var));
}

double exact_psi(const ModelParams& params) {
    return psi_from_joint(enumerate_coupling_joint(params));
}

double max_conditional_removal_deviation(const ModelParams& params) {
    check_enumeration_cap(params, kMaxJointN, "joint enumeration");
    const int n = params.n;
    const double p = params.p();
    const PairTable pt(n);
    const PairTable pt_red(n - 1);
    const auto w = edge_weights(p, pt.m);
    const auto w_red = edge_weights(p, pt_red.m);

    // cond[i][k][h] = P(G has D_i = k and reduced mask h), h over n-1 vertices
    const std::size_t n_masks_red = 1u << pt_red.m;
    std::vector<std::vector<std::vector<KahanSum>>> cond(
        static_cast<std::size_t>(n),
        std::vector<std::vector<KahanSum>>(static_cast<std::size_t>(n),
                                           std::vector<KahanSum>(n_masks_red)));
    std::vector<KahanSum> deg_prob(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    std::vector<int> deg;
    for (std::uint32_t mask = 0; mask < (1u << pt.m); ++mask) {
        degrees_of_mask(pt, mask, deg);
        const double pg = w[static_cast<std::size_t>(__builtin_popcount(mask))];
        for (int i = 0; i < n; ++i) {
            std::uint32_t h = 0;
            int bit = 0;
            for (int e = 0; e < pt.m; ++e) {
                const auto [u, v] = pt.pairs[static_cast<std::size_t>(e)];
                if (u == i || v == i) continue;
                if (mask >> e & 1u) h |= 1u << bit;
                ++bit;
            }
            const int k = deg[static_cast<std::size_t>(i)];
            cond[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)][h].add(pg);
            deg_prob[static_cast<std::size_t>(i) * n + k].add(pg);
        }
    }
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double total = deg_prob[static_cast<std::size_t>(i) * n + k].value();
            if (!(total > 0.0)) continue;
            for (std::size_t h = 0; h < n_masks_red; ++h) {
                const double conditional =
                    cond[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)][h].value() /
                    total;
                const double product =
                    w_red[static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(h)))];
                worst = std::max(worst, std::fabs(conditional - product));
            }
        }
    }
    return worst;
}

double exact_kolmogorov(const ExactDist& dist, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    double cdf = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        const double w = (dist.support[i] - mu) / sigma;
        const double target = norm_cdf(w);
        worst = std::max(worst, std::fabs(cdf - target));  // left limit at the atom
        cdf += dist.probs[i];
        worst = std::max(worst, std::fabs(cdf - target));
    }
    return worst;
}

double exact_wasserstein(const ExactDist& dist, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    const std::size_t count = dist.support.size();
    std::vector<double> w(count);
    for (std::size_t i = 0; i < count; ++i) w[i] = (dist.support[i] - mu) / sigma;

    // between consecutive atoms F is the constant c; integrate |Phi - c|
    // with the antiderivative A and a split at Phi^{-1}(c)
    const auto segment = [](double a, double b, double c) {
        if (c <= 0.0) return norm_cdf_antideriv(b) - norm_cdf_antideriv(a);
        if (c >= 1.0)
            return (b - norm_cdf_antideriv(b)) - (a - norm_cdf_antideriv(a));
        const double zc = norm_quantile(c);
        double total = 0.0;
        if (a < std::min(b, zc)) {
            const double hi = std::min(b, zc);
            total += c * (hi - a) - (norm_cdf_antideriv(hi) - norm_cdf_antideriv(a));
        }
        if (std::max(a, zc) < b) {
            const double lo = std::max(a, zc);
            total += (norm_cdf_antideriv(b) - norm_cdf_antideriv(lo)) - c * (b - lo);
        }
        return total;
    };

    double total = norm_cdf_antideriv(w.front());  // left tail, F = 0
    double cdf = 0.0;
    for (std::size_t i = 0; i + 1 < count; ++i) {
        cdf += dist.probs[i];
        total += segment(w[i], w[i + 1], cdf);
    }
    total += norm_cdf_antideriv(w.back()) - w.back();  // right tail, F = 1
    return total;
}

}  // namespace degstein
