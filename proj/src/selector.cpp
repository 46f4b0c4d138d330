#include "mdlhisto/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace mdlhisto::selector {

namespace {

constexpr double kWidthTol = 1.0 - 1e-9;

using Mask = std::vector<std::vector<char>>;

Mask empty_mask(const LayerSet& ls) {
    Mask m(ls.layers.size());
    for (std::size_t j = 0; j < ls.layers.size(); ++j)
        m[j].assign(ls.layers[j].hist.bin_count(), 0);
    return m;
}

Mask to_mask(const LayerSet& ls, const Selection& sel) {
    if (sel.retained.size() != ls.layers.size())
        throw std::invalid_argument("selection layer count does not match layer set");
    Mask m = empty_mask(ls);
    for (std::size_t j = 0; j < ls.layers.size(); ++j) {
        for (int b : sel.retained[j]) {
            if (b < 0 || static_cast<std::size_t>(b) >= ls.layers[j].hist.bin_count())
                throw std::out_of_range("selection references nonexistent bin " +
                                        std::to_string(b) + " in layer " + std::to_string(j + 1));
            m[j][static_cast<std::size_t>(b)] = 1;
        }
    }
    return m;
}

Selection to_selection(const Mask& mask) {
    Selection sel;
    sel.retained.resize(mask.size());
    for (std::size_t j = 0; j < mask.size(); ++j)
        for (std::size_t b = 0; b < mask[j].size(); ++b)
            if (mask[j][b]) sel.retained[j].push_back(static_cast<int>(b));
    return sel;
}

// Residual histogram over the non-retained coefficients. Equal-width bins
// for the fixed criterion, Laplace equal-mass bins otherwise; the bin count
// drops below `requested` when widths would fall under delta.
histo::Histogram build_residual_hist(std::span<const double> values, int requested,
                                     bool equal_width, double delta) {
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (equal_width) {
        double span = hi - lo;
        if (span < delta) span = delta;
        const int cells = static_cast<int>(std::floor(span / delta * (1.0 + 1e-12)));
        const int m_eff = std::max(1, std::min(requested, cells));
        const double top = std::max(lo + span, hi);  // lo + (hi - lo) can round below hi
        return histo::build_equal_width(values, m_eff, lo, top, delta);
    }
    double abs_sum = 0.0;
    for (double v : values) abs_sum += std::abs(v);
    if (abs_sum == 0.0) {
        // all-zero residual: a single cell at the quantization floor
        histo::Histogram h;
        h.delta = delta;
        h.edges = {-0.5 * delta, 0.5 * delta};
        h.counts = {static_cast<std::int64_t>(values.size())};
        return h;
    }
    const auto model = histo::fit_laplace(values, delta);
    return histo::build_equal_mass_clamped(values, requested, model, delta);
}

double width_cost(const histo::Histogram& h, std::size_t bin, bool literal, double delta) {
    const double per_bin = std::log2(h.width(bin) / delta);
    return literal ? per_bin : static_cast<double>(h.counts[bin]) * per_bin;
}

struct EvalResult {
    CodeLenBreakdown breakdown;
    int chosen_residual_bins = 1;
};

class CriterionEvaluator {
  public:
    CriterionEvaluator(const LayerSet& ls, Criterion crit, std::vector<int> m_search,
                       bool literal)
        : ls_(ls), crit_(crit), m_search_(std::move(m_search)), literal_(literal) {
        if (m_search_.empty())
            throw std::invalid_argument("residual bin search set must not be empty");
        for (int m : m_search_)
            if (m < 1) throw std::invalid_argument("residual bin counts must be >= 1");
        residual_.reserve(static_cast<std::size_t>(ls.total_count));
    }

    EvalResult evaluate(const Mask& mask) const {
        CodeLenBreakdown bd;
        bd.layer_bits.resize(ls_.layers.size(), 0.0);
        std::int64_t k_total = 0;
        residual_.clear();
        for (std::size_t j = 0; j < ls_.layers.size(); ++j) {
            bd.layer_bits[j] = layer_term(j, mask[j], &k_total);
            gather_layer_residual(j, mask[j]);
        }
        double model_bits = 0.0;
        for (double b : bd.layer_bits) model_bits += b;

        EvalResult best;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int m : m_search_) {
            auto [res_bits, par_bits, m_eff] = residual_term(m, k_total);
            const double total = model_bits + res_bits + par_bits;
            if (total < best_cost) {
                best_cost = total;
                best.breakdown = bd;
                best.breakdown.residual_bits = res_bits;
                best.breakdown.parameter_bits = par_bits;
                best.breakdown.total = total;
                best.breakdown.residual_bins_used = m_eff;
                best.chosen_residual_bins = m;
            }
            if (residual_.empty()) break;  // all m are equivalent
        }
        return best;
    }

  private:
    double layer_term(std::size_t j, const std::vector<char>& row, std::int64_t* k_total) const {
        const Layer& layer = ls_.layers[j];
        const std::int64_t n_j = layer.count();
        std::vector<std::int64_t> slots;
        std::int64_t k_j = 0;
        std::int64_t s_j = 0;
        double w_bits = 0.0;
        for (std::size_t b = 0; b < row.size(); ++b) {
            if (!row[b]) continue;
            slots.push_back(layer.hist.counts[b]);
            k_j += layer.hist.counts[b];
            ++s_j;
            w_bits += width_cost(layer.hist, b, literal_ && crit_ != Criterion::LayeredFixed,
                                 ls_.delta);
        }
        *k_total += k_j;
        if (crit_ == Criterion::GlobalVariableAlt) {
            return histo::log_multinomial(slots) + histo::log_binomial(k_j + s_j, k_j) + w_bits;
        }
        slots.push_back(n_j - k_j);
        return histo::log_multinomial(slots) + histo::log_binomial(n_j + s_j + 1, n_j) + w_bits;
    }

    void gather_layer_residual(std::size_t j, const std::vector<char>& row) const {
        const Layer& layer = ls_.layers[j];
        if (layer.degenerate()) {
            residual_.insert(residual_.end(), layer.coeffs.begin(), layer.coeffs.end());
            return;
        }
        for (std::size_t b = 0; b < row.size(); ++b) {
            if (row[b]) continue;
            for (int idx : layer.members[b])
                residual_.push_back(layer.coeffs[static_cast<std::size_t>(idx)]);
        }
    }

    // (residual bits, parameter bits, effective bin count)
    std::tuple<double, double, int> residual_term(int m, std::int64_t k_total) const {
        if (residual_.empty()) return {0.0, 0.0, 0};
        const auto h = build_residual_hist(residual_, m, crit_ == Criterion::LayeredFixed,
                                           ls_.delta);
        const auto m_eff = static_cast<std::int64_t>(h.bin_count());
        const auto n_res = static_cast<std::int64_t>(residual_.size());
        double w_bits = 0.0;
        for (std::size_t b = 0; b < h.bin_count(); ++b)
            w_bits += width_cost(h, b, literal_ && crit_ != Criterion::LayeredFixed, ls_.delta);

        double bits = 0.0, par = 0.0;
        switch (crit_) {
            case Criterion::LayeredFixed: {
                bits = histo::log_multinomial(h.counts) +
                       histo::log_binomial(n_res + m_eff, m_eff) + w_bits;
                const double cells = h.range() / ls_.delta;
                par = std::log2(std::max(cells, 1.0)) + histo::log2_log2_clamped(cells) +
                      histo::model_order_cost(m_eff);
                break;
            }
            case Criterion::GlobalVariable:
                bits = histo::log_multinomial(h.counts) +
                       histo::log_binomial(n_res + m_eff, m_eff) + w_bits;
                break;
            case Criterion::GlobalVariableAlt: {
                // The residual multinomial locates every coefficient: one slot
                // per residual bin plus one slot for the retained points, so
                // the slots total the full coefficient count.
                std::vector<std::int64_t> slots = h.counts;
                slots.push_back(k_total);
                bits = histo::log_multinomial(slots) +
                       histo::log_binomial(ls_.total_count + m_eff + 1, m_eff) + w_bits;
                break;
            }
        }
        return {bits, par, static_cast<int>(m_eff)};
    }

    const LayerSet& ls_;
    Criterion crit_;
    std::vector<int> m_search_;
    bool literal_;
    mutable std::vector<double> residual_;
};

std::vector<std::pair<std::size_t, std::size_t>> visitation_order(const LayerSet& ls,
                                                                  GreedyOrder order) {
    std::vector<std::pair<std::size_t, std::size_t>> bins;
    for (std::size_t j = 0; j < ls.layers.size(); ++j)
        for (std::size_t b = 0; b < ls.layers[j].hist.bin_count(); ++b) bins.emplace_back(j, b);
    auto magnitude = [&](const std::pair<std::size_t, std::size_t>& p) {
        return std::abs(ls.layers[p.first].hist.center(p.second));
    };
    if (order == GreedyOrder::MagnitudeDescending) {
        std::stable_sort(bins.begin(), bins.end(), [&](const auto& a, const auto& b) {
            const double ma = magnitude(a), mb = magnitude(b);
            if (ma != mb) return ma > mb;
            return a < b;
        });
    } else {
        std::stable_sort(bins.begin(), bins.end(), [&](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;  // coarsest layer first
            const double ma = magnitude(a), mb = magnitude(b);
            if (ma != mb) return ma > mb;
            return a.second < b.second;
        });
    }
    return bins;
}

SearchResult greedy_core(const LayerSet& ls, const SearchOptions& opts, GreedyOrder order,
                         Mask mask, const Mask* locked) {
    const CriterionEvaluator eval(ls, opts.criterion, opts.residual_bin_search,
                                  opts.literal_width_cost);
    const auto bins = visitation_order(ls, order);
    EvalResult best = eval.evaluate(mask);
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        bool changed = false;
        for (const auto& [j, b] : bins) {
            if (locked && (*locked)[j][b]) continue;
            const bool adding = !mask[j][b];
            mask[j][b] = static_cast<char>(!mask[j][b]);
            const EvalResult cand = eval.evaluate(mask);
            const bool accept = adding ? cand.breakdown.total <= best.breakdown.total
                                       : cand.breakdown.total < best.breakdown.total;
            if (accept) {
                best = cand;
                changed = true;
            } else {
                mask[j][b] = static_cast<char>(!mask[j][b]);
            }
        }
        if (!changed) break;
    }
    return {to_selection(mask), best.breakdown, best.chosen_residual_bins};
}

// Split one occupied bin of a layer in place; returns false when the split
// is impossible without violating the width >= delta constraint.
bool split_bin(Layer& layer, std::size_t b, HistogramMode mode, double delta) {
    auto& hist = layer.hist;
    const double lo = hist.edges[b], hi = hist.edges[b + 1];
    if (hist.counts[b] == 0 || hi - lo < 2.0 * delta * kWidthTol) return false;

    double edge = 0.0;
    bool found = false;
    if (mode == HistogramMode::FixedWidth) {
        edge = 0.5 * (lo + hi);
        found = edge - lo >= delta * kWidthTol && hi - edge >= delta * kWidthTol;
    } else {
        const auto& mem = layer.members[b];
        const auto c = static_cast<std::ptrdiff_t>(mem.size());
        auto value = [&](std::ptrdiff_t i) {
            return layer.coeffs[static_cast<std::size_t>(mem[static_cast<std::size_t>(i)])];
        };
        // candidate split between distinct neighbours, nearest the occupancy median
        const std::ptrdiff_t target = c / 2 - 1;
        for (std::ptrdiff_t off = 0; off < c && !found; ++off) {
            for (int sign : {1, -1}) {
                const std::ptrdiff_t i = target + sign * off;
                if (i < 0 || i + 1 >= c) continue;
                if (value(i) >= value(i + 1)) continue;
                const double e = 0.5 * (value(i) + value(i + 1));
                if (e - lo >= delta * kWidthTol && hi - e >= delta * kWidthTol) {
                    edge = e;
                    found = true;
                    break;
                }
                if (off == 0) break;  // sign makes no difference at offset 0
            }
        }
    }
    if (!found) return false;

    std::vector<int> left, right;
    for (int idx : layer.members[b]) {
        if (layer.coeffs[static_cast<std::size_t>(idx)] < edge)
            left.push_back(idx);
        else
            right.push_back(idx);
    }
    if (left.empty() || right.empty()) return false;
    hist.edges.insert(hist.edges.begin() + static_cast<std::ptrdiff_t>(b) + 1, edge);
    hist.counts[b] = static_cast<std::int64_t>(left.size());
    hist.counts.insert(hist.counts.begin() + static_cast<std::ptrdiff_t>(b) + 1,
                       static_cast<std::int64_t>(right.size()));
    layer.members[b] = std::move(left);
    layer.members.insert(layer.members.begin() + static_cast<std::ptrdiff_t>(b) + 1,
                         std::move(right));
    return true;
}

}  // namespace

LayerSet make_layer_set(const std::vector<std::vector<double>>& layer_coeffs, HistogramMode mode,
                        int bins_per_layer, double delta) {
    if (bins_per_layer < 1) throw std::invalid_argument("bins per layer must be >= 1");
    LayerSet ls;
    ls.mode = mode;
    double r_max = 0.0;
    for (const auto& coeffs : layer_coeffs) {
        Layer layer;
        layer.coeffs = coeffs;
        if (!coeffs.empty()) {
            const auto [lo, hi] = std::minmax_element(coeffs.begin(), coeffs.end());
            layer.range = *hi - *lo;
        }
        r_max = std::max(r_max, layer.range);
        ls.total_count += layer.count();
        ls.layers.push_back(std::move(layer));
    }
    ls.common_range = r_max;
    ls.delta = delta > 0.0 ? delta : (r_max > 0.0 ? r_max / 1024.0 : 1.0);

    for (auto& layer : ls.layers) {
        if (layer.coeffs.empty()) continue;
        double abs_sum = 0.0;
        for (double v : layer.coeffs) abs_sum += std::abs(v);
        if (abs_sum == 0.0) continue;  // all-zero layer: nothing worth retaining

        if (mode == HistogramMode::FixedWidth) {
            const auto [lo, hi] = std::minmax_element(layer.coeffs.begin(), layer.coeffs.end());
            const double mid = 0.5 * (*lo + *hi);
            double span = ls.common_range;
            int m_eff = 1;
            if (span < ls.delta) {
                span = ls.delta;
            } else {
                const int cells = static_cast<int>(std::floor(span / ls.delta * (1.0 + 1e-12)));
                m_eff = std::max(1, std::min(bins_per_layer, cells));
            }
            double a = mid - 0.5 * span, b = mid + 0.5 * span;
            if (a > *lo) a = *lo;  // guard rounding at the widest layer
            if (b < *hi) b = *hi;
            layer.hist = histo::build_equal_width(layer.coeffs, m_eff, a, b, ls.delta);
        } else {
            const auto model = histo::fit_laplace(layer.coeffs, ls.delta);
            layer.hist =
                histo::build_equal_mass_clamped(layer.coeffs, bins_per_layer, model, ls.delta);
        }
        layer.members.assign(layer.hist.bin_count(), {});
        for (std::size_t i = 0; i < layer.coeffs.size(); ++i)
            layer.members[histo::bin_index(layer.hist.edges, layer.coeffs[i])].push_back(
                static_cast<int>(i));
        for (auto& mem : layer.members)
            std::stable_sort(mem.begin(), mem.end(), [&](int a, int b) {
                return layer.coeffs[static_cast<std::size_t>(a)] <
                       layer.coeffs[static_cast<std::size_t>(b)];
            });
    }
    return ls;
}

Selection Selection::none_of(const LayerSet& ls) {
    Selection s;
    s.retained.resize(ls.layers.size());
    return s;
}

Selection Selection::all_of(const LayerSet& ls) {
    Selection s;
    s.retained.resize(ls.layers.size());
    for (std::size_t j = 0; j < ls.layers.size(); ++j)
        for (std::size_t b = 0; b < ls.layers[j].hist.bin_count(); ++b)
            s.retained[j].push_back(static_cast<int>(b));
    return s;
}

std::int64_t Selection::retained_bin_count() const {
    std::int64_t n = 0;
    for (const auto& r : retained) n += static_cast<std::int64_t>(r.size());
    return n;
}

std::vector<std::int64_t> retained_counts(const LayerSet& ls, const Selection& sel) {
    const Mask mask = to_mask(ls, sel);
    std::vector<std::int64_t> k(ls.layers.size(), 0);
    for (std::size_t j = 0; j < ls.layers.size(); ++j)
        for (std::size_t b = 0; b < mask[j].size(); ++b)
            if (mask[j][b]) k[j] += ls.layers[j].hist.counts[b];
    return k;
}

CodeLenBreakdown criterion_fixed(const LayerSet& ls, const Selection& sel, int residual_bins) {
    return evaluate_criterion(ls, sel, Criterion::LayeredFixed, residual_bins, false);
}

CodeLenBreakdown criterion_variable(const LayerSet& ls, const Selection& sel, int residual_bins,
                                    bool literal_width_cost) {
    return evaluate_criterion(ls, sel, Criterion::GlobalVariable, residual_bins,
                              literal_width_cost);
}

CodeLenBreakdown criterion_variable_alt(const LayerSet& ls, const Selection& sel,
                                        int residual_bins, bool literal_width_cost) {
    return evaluate_criterion(ls, sel, Criterion::GlobalVariableAlt, residual_bins,
                              literal_width_cost);
}

CodeLenBreakdown evaluate_criterion(const LayerSet& ls, const Selection& sel, Criterion crit,
                                    int residual_bins, bool literal_width_cost) {
    const CriterionEvaluator eval(ls, crit, {residual_bins}, literal_width_cost);
    return eval.evaluate(to_mask(ls, sel)).breakdown;
}

SearchResult optimize_exhaustive(const LayerSet& ls, const SearchOptions& opts) {
    std::vector<std::pair<std::size_t, std::size_t>> bins;
    for (std::size_t j = 0; j < ls.layers.size(); ++j)
        for (std::size_t b = 0; b < ls.layers[j].hist.bin_count(); ++b) bins.emplace_back(j, b);
    if (bins.size() > 20)
        throw std::invalid_argument("exhaustive search refuses " + std::to_string(bins.size()) +
                                    " bins (limit 20); use a greedy optimizer");

    const CriterionEvaluator eval(ls, opts.criterion, opts.residual_bin_search,
                                  opts.literal_width_cost);
    Mask mask = empty_mask(ls);
    SearchResult best;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::size_t, std::size_t>> best_key, key;

    const std::uint64_t limit = std::uint64_t{1} << bins.size();
    for (std::uint64_t bitset = 0; bitset < limit; ++bitset) {
        for (std::size_t i = 0; i < bins.size(); ++i)
            mask[bins[i].first][bins[i].second] =
                static_cast<char>((bitset >> i) & 1u);
        const EvalResult cand = eval.evaluate(mask);
        key.clear();
        for (std::size_t i = 0; i < bins.size(); ++i)
            if ((bitset >> i) & 1u) key.push_back(bins[i]);
        const bool better =
            cand.breakdown.total < best_cost ||
            (cand.breakdown.total == best_cost &&
             (key.size() < best_key.size() || (key.size() == best_key.size() && key < best_key)));
        if (better) {
            best_cost = cand.breakdown.total;
            best_key = key;
            best.selection = to_selection(mask);
            best.breakdown = cand.breakdown;
            best.chosen_residual_bins = cand.chosen_residual_bins;
        }
    }
    return best;
}

SearchResult optimize_greedy_magnitude(const LayerSet& ls, const SearchOptions& opts) {
    return greedy_core(ls, opts, GreedyOrder::MagnitudeDescending, empty_mask(ls), nullptr);
}

SearchResult optimize_greedy_lowfreq(const LayerSet& ls, const SearchOptions& opts) {
    return greedy_core(ls, opts, GreedyOrder::CoarsestFirst, empty_mask(ls), nullptr);
}

SearchResult greedy_from(const LayerSet& ls, const SearchOptions& opts, GreedyOrder order,
                         const Selection& start, const Selection* locked) {
    Mask lock_mask;
    if (locked) lock_mask = to_mask(ls, *locked);
    return greedy_core(ls, opts, order, to_mask(ls, start), locked ? &lock_mask : nullptr);
}

RefineResult refine_by_splitting(LayerSet& ls, const Selection& start, const SearchOptions& opts,
                                 int max_rounds, GreedyOrder order) {
    RefineResult out;
    {
        const CriterionEvaluator eval(ls, opts.criterion, opts.residual_bin_search,
                                      opts.literal_width_cost);
        const EvalResult cur = eval.evaluate(to_mask(ls, start));
        out.selection = start;
        out.breakdown = cur.breakdown;
        out.chosen_residual_bins = cur.chosen_residual_bins;
        out.accepted_totals = {cur.breakdown.total};
    }
    for (int round = 0; round < max_rounds; ++round) {
        const std::vector<Layer> snapshot = ls.layers;
        Mask mask = to_mask(ls, out.selection);
        // split every occupied non-retained bin, remapping the mask
        for (std::size_t j = 0; j < ls.layers.size(); ++j) {
            auto& layer = ls.layers[j];
            for (std::size_t b = 0; b < layer.hist.bin_count(); ++b) {
                if (mask[j][b]) continue;
                if (split_bin(layer, b, ls.mode, ls.delta)) {
                    mask[j].insert(mask[j].begin() + static_cast<std::ptrdiff_t>(b) + 1, 0);
                    ++b;  // both halves stay non-retained
                }
            }
        }
        const Selection locked = to_selection(mask);
        const SearchResult round_result = greedy_from(ls, opts, order, locked, &locked);
        if (round_result.breakdown.total < out.accepted_totals.back()) {
            out.selection = round_result.selection;
            out.breakdown = round_result.breakdown;
            out.chosen_residual_bins = round_result.chosen_residual_bins;
            out.accepted_totals.push_back(round_result.breakdown.total);
        } else {
            ls.layers = snapshot;
            break;
        }
    }
    return out;
}

}  // namespace mdlhisto::selector
