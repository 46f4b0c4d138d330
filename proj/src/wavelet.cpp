#include "mdlhisto/wavelet.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdlhisto::wavelet {

namespace {

// Daubechies lowpass taps for orders 1..10, computed by spectral
// factorization at 60-digit precision and rounded to double. Tests verify
// the algebraic conditions (sum, energy, QMF moments) rather than trusting
// the transcription.
const std::vector<std::vector<double>> kDaubechiesLowpass = {
    // db1
    {0.7071067811865475244, 0.7071067811865475244},
    // db2
    {-0.1294095225512603812, 0.2241438680420133810, 0.8365163037378079056,
     0.4829629131445341434},
    // db3
    {0.03522629188570953660, -0.08544127388202666169, -0.1350110200102545887,
     0.4598775021184915701, 0.8068915093110925765, 0.3326705529500826160},
    // db4
    {-0.01059740178506903210, 0.03288301166688519974, 0.03084138183556076363,
     -0.1870348117190930841, -0.02798376941685985421, 0.6308807679298589079,
     0.7148465705529156471, 0.2303778133088965009},
    // db5
    {0.003335725285473771278, -0.01258075199908199947, -0.006241490212798274274,
     0.07757149384004571352, -0.03224486958463837465, -0.2422948870663820319,
     0.1384281459013207315, 0.7243085284377729277, 0.6038292697971896705,
     0.1601023979741929145},
    // db6
    {-0.001077301085308479565, 0.004777257510945510640, 0.0005538422011614961393,
     -0.03158203931748602957, 0.02752286553030572863, 0.09750160558732304910,
     -0.1297668675672619356, -0.2262646939654398201, 0.3152503517091976291,
     0.7511339080210953507, 0.4946238903984530857, 0.1115407433501094636},
    // db7
    {0.0003537137999745202484, -0.001801640704047490915, 0.0004295779729213665211,
     0.01255099855609984061, -0.01657454163066688065, -0.03802993693501441358,
     0.08061260915108307191, 0.07130921926683026475, -0.2240361849938749826,
     -0.1439060039285649754, 0.4697822874051931225, 0.7291320908462351199,
     0.3965393194819173065, 0.07785205408500917902},
    // db8
    {-0.0001174767841247695337, 0.0006754494064505693664, -0.0003917403733769470463,
     -0.004870352993451574310, 0.008746094047405776716, 0.01398102791739828165,
     -0.04408825393079475151, -0.01736930100180754617, 0.1287474266204784589,
     0.0004724845739132827704, -0.2840155429615469265, -0.01582910525634930567,
     0.5853546836542067128, 0.6756307362972898068, 0.3128715909142999707,
     0.05441584224310400996},
    // db9
    {0.00003934732031627159948, -0.0002519631889427101370, 0.0002303857635231959672,
     0.001847646883056226477, -0.004281503682463429834, -0.004723204757751397278,
     0.02236166212367909721, 0.0002509471148314519576, -0.06763282906132997368,
     0.03072568147933337921, 0.1485407493381063801, -0.09684078322297646051,
     -0.2932737832791749088, 0.1331973858250075762, 0.6572880780513005381,
     0.6048231236901111119, 0.2438346746125903537, 0.03807794736387834659},
    // db10
    {-0.00001326420289452124481, 0.00009358867032006959133, -0.0001164668551292854510,
     -0.0006858566949597116266, 0.001992405295185056117, 0.001395351747052901166,
     -0.01073317548333057504, 0.003606553566956169655, 0.03321267405934100174,
     -0.02945753682187581286, -0.07139414716639708715, 0.09305736460357235116,
     0.1273693403357932601, -0.1959462743773770435, -0.2498464243273153794,
     0.2811723436605774607, 0.6884590394536035657, 0.5272011889317255865,
     0.1881768000776914890, 0.02667005790055555359},
};

// One analysis step with circular indexing: n even, outputs of length n/2.
void dwt_step(std::span<const double> x, const FilterSpec& f,
              std::vector<double>& approx, std::vector<double>& detail) {
    const std::size_t n = x.size();
    const std::size_t half = n / 2;
    const std::size_t taps = f.length();
    approx.assign(half, 0.0);
    detail.assign(half, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        double a = 0.0, d = 0.0;
        std::size_t pos = (2 * i) % n;
        for (std::size_t k = 0; k < taps; ++k) {
            const double v = x[pos];
            a += f.lowpass[k] * v;
            d += f.highpass[k] * v;
            if (++pos == n) pos = 0;
        }
        approx[i] = a;
        detail[i] = d;
    }
}

// Adjoint of dwt_step; exact inverse because the filter bank is orthonormal.
void idwt_step(std::span<const double> approx, std::span<const double> detail,
               const FilterSpec& f, std::vector<double>& out) {
    const std::size_t half = approx.size();
    const std::size_t n = 2 * half;
    const std::size_t taps = f.length();
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        std::size_t pos = (2 * i) % n;
        for (std::size_t k = 0; k < taps; ++k) {
            out[pos] += f.lowpass[k] * approx[i] + f.highpass[k] * detail[i];
            if (++pos == n) pos = 0;
        }
    }
}

void check_depth(std::size_t length, int levels, const char* what) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    const std::size_t block = std::size_t{1} << levels;
    if (length < block || length % block != 0)
        throw std::invalid_argument(std::string(what) + " length " +
                                    std::to_string(length) +
                                    " is not a positive multiple of 2^levels = " +
                                    std::to_string(block));
}

std::vector<double> grid_row(const Grid& g, std::size_t r) {
    return {g.data.begin() + static_cast<std::ptrdiff_t>(r * g.cols),
            g.data.begin() + static_cast<std::ptrdiff_t>((r + 1) * g.cols)};
}

std::vector<double> grid_col(const Grid& g, std::size_t c) {
    std::vector<double> out(g.rows);
    for (std::size_t r = 0; r < g.rows; ++r) out[r] = g.at(r, c);
    return out;
}

}  // namespace

FilterSpec daubechies_filter(int order) {
    if (order < 1 || order > 10)
        throw std::invalid_argument("unsupported Daubechies order " +
                                    std::to_string(order) + " (supported: 1..10)");
    FilterSpec f;
    f.order = order;
    f.lowpass = kDaubechiesLowpass[static_cast<std::size_t>(order - 1)];
    const std::size_t n = f.lowpass.size();
    f.highpass.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double v = f.lowpass[n - 1 - k];
        f.highpass[k] = (k % 2 == 0) ? v : -v;
    }
    return f;
}

std::size_t Decomposition1D::coefficient_count() const {
    std::size_t total = approx.size();
    for (const auto& d : details) total += d.size();
    return total;
}

std::size_t Decomposition2D::coefficient_count() const {
    std::size_t total = approx.size();
    for (const auto& s : subbands) total += s.grid.size();
    return total;
}

Decomposition1D dwt1d(std::span<const double> signal, const FilterSpec& filter, int levels) {
    check_depth(signal.size(), levels, "signal");
    Decomposition1D d;
    d.levels = levels;
    d.filter = filter;
    d.original_length = signal.size();
    std::vector<double> current(signal.begin(), signal.end());
    std::vector<double> approx, detail;
    for (int lv = 0; lv < levels; ++lv) {
        dwt_step(current, filter, approx, detail);
        d.details.push_back(detail);
        current = approx;
    }
    d.approx = current;
    return d;
}

std::vector<double> idwt1d(const Decomposition1D& decomp) {
    if (decomp.levels < 1 || decomp.details.size() != static_cast<std::size_t>(decomp.levels))
        throw std::invalid_argument("decomposition has inconsistent level count");
    std::vector<double> current = decomp.approx;
    std::vector<double> next;
    for (int lv = decomp.levels - 1; lv >= 0; --lv) {
        const auto& detail = decomp.details[static_cast<std::size_t>(lv)];
        if (detail.size() != current.size())
            throw std::invalid_argument("detail layer " + std::to_string(lv + 1) +
                                        " size does not match approximation");
        idwt_step(current, detail, decomp.filter, next);
        current = std::move(next);
    }
    if (current.size() != decomp.original_length)
        throw std::invalid_argument("reconstruction length does not match metadata");
    return current;
}

Decomposition2D dwt2d(const Grid& image, const FilterSpec& filter, int levels) {
    check_depth(image.rows, levels, "image row");
    check_depth(image.cols, levels, "image column");
    Decomposition2D d;
    d.levels = levels;
    d.filter = filter;
    d.original_rows = image.rows;
    d.original_cols = image.cols;

    Grid current = image;
    std::vector<double> a, dt;
    for (int lv = 1; lv <= levels; ++lv) {
        const std::size_t hr = current.rows / 2, hc = current.cols / 2;
        // filter along each row, split into lowpass | highpass halves
        Grid rowlo(current.rows, hc), rowhi(current.rows, hc);
        for (std::size_t r = 0; r < current.rows; ++r) {
            dwt_step(grid_row(current, r), filter, a, dt);
            for (std::size_t c = 0; c < hc; ++c) {
                rowlo.at(r, c) = a[c];
                rowhi.at(r, c) = dt[c];
            }
        }
        // then down each column
        Grid ll(hr, hc), lh(hr, hc), hl(hr, hc), hh(hr, hc);
        for (std::size_t c = 0; c < hc; ++c) {
            dwt_step(grid_col(rowlo, c), filter, a, dt);
            for (std::size_t r = 0; r < hr; ++r) {
                ll.at(r, c) = a[r];
                lh.at(r, c) = dt[r];
            }
            dwt_step(grid_col(rowhi, c), filter, a, dt);
            for (std::size_t r = 0; r < hr; ++r) {
                hl.at(r, c) = a[r];
                hh.at(r, c) = dt[r];
            }
        }
        d.subbands.push_back({Orientation::HL, lv, std::move(hl)});
        d.subbands.push_back({Orientation::LH, lv, std::move(lh)});
        d.subbands.push_back({Orientation::HH, lv, std::move(hh)});
        current = std::move(ll);
    }
    d.approx = std::move(current);
    return d;
}

Grid idwt2d(const Decomposition2D& decomp) {
    if (decomp.levels < 1 ||
        decomp.subbands.size() != static_cast<std::size_t>(3 * decomp.levels))
        throw std::invalid_argument("decomposition has inconsistent subband count");
    Grid current = decomp.approx;
    std::vector<double> merged;
    for (int lv = decomp.levels; lv >= 1; --lv) {
        const auto& hl = decomp.subbands[static_cast<std::size_t>(3 * (lv - 1) + 0)].grid;
        const auto& lh = decomp.subbands[static_cast<std::size_t>(3 * (lv - 1) + 1)].grid;
        const auto& hh = decomp.subbands[static_cast<std::size_t>(3 * (lv - 1) + 2)].grid;
        const std::size_t hr = current.rows, hc = current.cols;
        if (hl.rows != hr || hl.cols != hc || lh.rows != hr || lh.cols != hc ||
            hh.rows != hr || hh.cols != hc)
            throw std::invalid_argument("subband shape mismatch at level " + std::to_string(lv));
        // invert the column pass
        Grid rowlo(2 * hr, hc), rowhi(2 * hr, hc);
        for (std::size_t c = 0; c < hc; ++c) {
            idwt_step(grid_col(current, c), grid_col(lh, c), decomp.filter, merged);
            for (std::size_t r = 0; r < 2 * hr; ++r) rowlo.at(r, c) = merged[r];
            idwt_step(grid_col(hl, c), grid_col(hh, c), decomp.filter, merged);
            for (std::size_t r = 0; r < 2 * hr; ++r) rowhi.at(r, c) = merged[r];
        }
        // invert the row pass
        Grid out(2 * hr, 2 * hc);
        for (std::size_t r = 0; r < 2 * hr; ++r) {
            idwt_step(grid_row(rowlo, r), grid_row(rowhi, r), decomp.filter, merged);
            for (std::size_t c = 0; c < 2 * hc; ++c) out.at(r, c) = merged[c];
        }
        current = std::move(out);
    }
    if (current.rows != decomp.original_rows || current.cols != decomp.original_cols)
        throw std::invalid_argument("reconstruction shape does not match metadata");
    return current;
}

}  // namespace mdlhisto::wavelet
