#include "kuramoto/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <tuple>

#include "kuramoto/certificates.hpp"
#include "kuramoto/errors.hpp"

namespace kuramoto {

bool moment_point_feasible(double rho1, double rho2_abs, double mu_tilde)
{
    if (eq10_slack(rho1, rho2_abs, mu_tilde) < 0.0) return false;
    if (rho1 <= 0.0) return true;
    const double e = 1.0 + rho2_abs * rho2_abs - 2.0 * rho1 * rho1;
    return rho2_abs >= optimal_x0(rho1, mu_tilde, e).bound;
}

double FeasibilityRegion::coordinate(std::size_t index) const
{
    return std::min(1.0, static_cast<double>(index) * grid_step);
}

bool FeasibilityRegion::contains(std::size_t row, std::size_t col) const
{
    auto it = std::lower_bound(runs.begin(), runs.end(), row,
                               [](const FeasibleRun& r, std::size_t rw) { return r.row < rw; });
    for (; it != runs.end() && it->row == row; ++it)
        if (col >= it->begin && col < it->end) return true;
    return false;
}

std::size_t FeasibilityRegion::point_count() const
{
    std::size_t total = 0;
    for (const auto& r : runs) total += r.end - r.begin;
    return total;
}

namespace {

std::size_t grid_points(double step)
{
    if (!(step > 0.0 && step <= 0.5)) throw DomainError("feasibility_scan: grid_step must lie in (0, 0.5]");
    return static_cast<std::size_t>(std::floor(1.0 / step + 1e-9)) + 1;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

std::vector<FeasibleComponent> label_components(const std::vector<FeasibleRun>& runs)
{
    DisjointSets sets(runs.size());
    // runs are sorted by row; walk pairs of consecutive rows with two cursors
    std::size_t prev_begin = 0, prev_end = 0;
    std::size_t i = 0;
    while (i < runs.size()) {
        std::size_t j = i;
        while (j < runs.size() && runs[j].row == runs[i].row) ++j;
        if (prev_end > prev_begin && runs[prev_begin].row + 1 == runs[i].row) {
            std::size_t a = prev_begin, b = i;
            while (a < prev_end && b < j) {
                if (runs[a].begin < runs[b].end && runs[b].begin < runs[a].end) sets.unite(a, b);
                if (runs[a].end < runs[b].end)
                    ++a;
                else
                    ++b;
            }
        }
        prev_begin = i;
        prev_end = j;
        i = j;
    }

    std::vector<std::size_t> root_to_component(runs.size(), SIZE_MAX);
    std::vector<FeasibleComponent> comps;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto root = sets.find(r);
        if (root_to_component[root] == SIZE_MAX) {
            root_to_component[root] = comps.size();
            comps.push_back({runs[r].row, runs[r].row, runs[r].begin, runs[r].end - 1, 0});
        }
        auto& c = comps[root_to_component[root]];
        c.row_min = std::min(c.row_min, runs[r].row);
        c.row_max = std::max(c.row_max, runs[r].row);
        c.col_min = std::min(c.col_min, runs[r].begin);
        c.col_max = std::max(c.col_max, runs[r].end - 1);
        c.points += runs[r].end - runs[r].begin;
    }
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
        return std::tie(a.row_min, a.col_min) < std::tie(b.row_min, b.col_min);
    });
    return comps;
}

} // namespace

FeasibilityRegion feasibility_scan(double mu_tilde, double grid_step)
{
    FeasibilityRegion region;
    region.mu_tilde = mu_tilde;
    region.grid_step = grid_step;
    region.grid_size = grid_points(grid_step);
    const auto size = region.grid_size;

    std::vector<std::vector<FeasibleRun>> per_row(size);
#pragma omp parallel for schedule(dynamic, 16)
    for (long ii = 0; ii < static_cast<long>(size); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double rho1 = region.coordinate(i);
        auto& out = per_row[i];
        bool open = false;
        std::size_t start = 0;
        for (std::size_t j = 0; j < size; ++j) {
            const bool ok = moment_point_feasible(rho1, region.coordinate(j), mu_tilde);
            if (ok && !open) {
                open = true;
                start = j;
            } else if (!ok && open) {
                open = false;
                out.push_back({i, start, j});
            }
        }
        if (open) out.push_back({i, start, size});
    }
    for (auto& row : per_row) region.runs.insert(region.runs.end(), row.begin(), row.end());
    region.components = label_components(region.runs);
    return region;
}

namespace {

constexpr int bisection_steps = 60;
constexpr std::size_t refinement_samples = 20001;

// Does some sample in [lo, hi] (uniform samples plus the grid points inside)
// make the predicate true?
template <class Pred>
bool any_in_range(double lo, double hi, double grid_step, Pred&& pred)
{
    if (hi < lo) return false;
    for (std::size_t s = 0; s < refinement_samples; ++s) {
        const double x = lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(refinement_samples - 1);
        if (pred(x)) return true;
    }
    for (double x = std::ceil(lo / grid_step) * grid_step; x <= hi; x += grid_step)
        if (pred(x)) return true;
    return false;
}

// Bisect between a point where `inside` holds and one where it does not.
template <class Pred>
double bisect(double inside, double outside, Pred&& pred)
{
    for (int it = 0; it < bisection_steps; ++it) {
        const double mid = 0.5 * (inside + outside);
        if (pred(mid))
            inside = mid;
        else
            outside = mid;
    }
    return inside;
}

} // namespace

RegionThresholds refine_thresholds(const FeasibilityRegion& region)
{
    if (region.components.empty()) throw PreconditionError("refine_thresholds: region is empty");
    const auto h = region.grid_step;
    const auto mu = region.mu_tilde;
    const auto& comps = region.components;

    const auto sync_it = std::max_element(comps.begin(), comps.end(),
                                          [](const auto& a, const auto& b) { return a.row_max < b.row_max; });
    const auto& sync = *sync_it;

    RegionThresholds out;
    {
        const double r2_lo = std::max(0.0, region.coordinate(sync.col_min) - h);
        const double r2_hi = std::min(1.0, region.coordinate(sync.col_max) + h);
        auto feasible_row = [&](double rho1) {
            return any_in_range(r2_lo, r2_hi, h, [&](double r2) { return moment_point_feasible(rho1, r2, mu); });
        };
        if (sync.row_min == 0)
            out.sync_rho1_min = 0.0;
        else
            out.sync_rho1_min = bisect(region.coordinate(sync.row_min), region.coordinate(sync.row_min - 1), feasible_row);
    }

    const FeasibleComponent* pattern = nullptr;
    for (const auto& c : comps)
        if (&c != &sync && c.row_max < sync.row_min) {
            pattern = &c;
            break;
        }
    if (pattern == nullptr) return out;

    const double r2_hi = std::min(1.0, region.coordinate(pattern->col_max) + h);
    const double r1_hi = std::min(1.0, region.coordinate(pattern->row_max) + h);
    auto feasible_row = [&](double rho1) {
        return any_in_range(0.0, r2_hi, h, [&](double r2) { return moment_point_feasible(rho1, r2, mu); });
    };
    auto feasible_col = [&](double r2) {
        return any_in_range(0.0, r1_hi, h, [&](double rho1) { return moment_point_feasible(rho1, r2, mu); });
    };
    out.pattern_rho1_max = bisect(region.coordinate(pattern->row_max), r1_hi, feasible_row);
    out.pattern_rho2_max = bisect(region.coordinate(pattern->col_max), r2_hi, feasible_col);
    return out;
}

nlohmann::json to_json(const FeasibilityRegion& region)
{
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : region.components) {
        comps.push_back({{"rho1_min", region.coordinate(c.row_min)},
                         {"rho1_max", region.coordinate(c.row_max)},
                         {"rho2_min", region.coordinate(c.col_min)},
                         {"rho2_max", region.coordinate(c.col_max)},
                         {"points", c.points}});
    }
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : region.runs) runs.push_back({r.row, r.begin, r.end});
    return {{"mu_tilde", region.mu_tilde},
            {"grid_step", region.grid_step},
            {"grid_size", region.grid_size},
            {"point_count", region.point_count()},
            {"components", std::move(comps)},
            {"runs", std::move(runs)}};
}

nlohmann::json to_json(const RegionThresholds& t)
{
    nlohmann::json j{{"sync_rho1_min", t.sync_rho1_min}};
    j["pattern_rho1_max"] = t.pattern_rho1_max ? nlohmann::json(*t.pattern_rho1_max) : nlohmann::json(nullptr);
    j["pattern_rho2_max"] = t.pattern_rho2_max ? nlohmann::json(*t.pattern_rho2_max) : nlohmann::json(nullptr);
    return j;
}

void write_region_csv(std::ostream& out, const FeasibilityRegion& region)
{
    out << "rho1,rho2_abs,feasible\n";
    auto run = region.runs.begin();
    for (std::size_t i = 0; i < region.grid_size; ++i) {
        for (std::size_t j = 0; j < region.grid_size; ++j) {
            while (run != region.runs.end() && (run->row < i || (run->row == i && run->end <= j))) ++run;
            const bool in = run != region.runs.end() && run->row == i && j >= run->begin;
            out << region.coordinate(i) << ',' << region.coordinate(j) << ',' << (in ? 1 : 0) << '\n';
        }
    }
}

} // namespace kuramoto
