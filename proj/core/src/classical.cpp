#include "qccp/classical.hpp"

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

#include "qccp/errors.hpp"
#include "qccp/rng.hpp"

namespace qccp {

namespace {

// Integer score tensor scaled by (d-1): coefficients (d-1)c_k = d-1-2k are
// integers, so all strategy values are exact integers over 4d(d-1). Using
// integer accumulation makes comparisons and tie-breaks exact.
// Layout: iscore[(i*2 + y)*d + g] with i = x0*2 + x.
std::vector<std::int64_t> integer_scores(const GameSpec& game) {
    const int d = game.d;
    std::vector<std::int64_t> sc(static_cast<std::size_t>(2 * d) * 2 * d, 0);
    for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int k = 0; k < game.k_max; ++k) {
                    const std::int64_t c = d - 1 - 2 * k;
                    const int i = x0 * 2 + x;
                    sc[(static_cast<std::size_t>(i) * 2 + y) * d +
                       target_f(d, x0, x, y, k)] += c;
                    sc[(static_cast<std::size_t>(i) * 2 + y) * d +
                       target_h(d, x0, x, y, k)] -= c;
                }
    return sc;
}

double scaled_to_value(const GameSpec& game, std::int64_t total) {
    return static_cast<double>(total) /
           (4.0 * game.d * (game.d > 1 ? game.d - 1 : 1));
}

// Optimal decoding for a fixed encoding, integer-exact. Ties broken by
// smallest g. Returns the scaled total; fills dec[m*2+y] if non-null.
std::int64_t best_decoding_total(const GameSpec& game,
                                 const std::vector<std::int64_t>& sc,
                                 const std::vector<int>& enc,
                                 std::vector<int>* dec) {
    const int d = game.d;
    std::int64_t total = 0;
    std::vector<std::int64_t> col(static_cast<std::size_t>(d) * d);
    for (int y = 0; y < 2; ++y) {
        std::fill(col.begin(), col.end(), 0);
        for (int i = 0; i < 2 * d; ++i) {
            const std::int64_t* row =
                &sc[(static_cast<std::size_t>(i) * 2 + y) * d];
            std::int64_t* dst = &col[static_cast<std::size_t>(enc[i]) * d];
            for (int g = 0; g < d; ++g) dst[g] += row[g];
        }
        for (int m = 0; m < d; ++m) {
            const std::int64_t* c = &col[static_cast<std::size_t>(m) * d];
            int arg = 0;
            for (int g = 1; g < d; ++g)
                if (c[g] > c[arg]) arg = g;
            total += c[arg];
            if (dec) (*dec)[m * 2 + y] = arg;
        }
    }
    return total;
}

void check_tables(const GameSpec& game, const ClassicalStrategy& s) {
    const int d = game.d;
    if (s.d != d) throw DomainError("strategy and game dimensions differ");
    if (s.encoding.size() != static_cast<std::size_t>(2 * d))
        throw DomainError("encoding must have 2d entries");
    if (s.decoding.size() != static_cast<std::size_t>(2 * d))
        throw DomainError("decoding must have 2d entries");
    for (int v : s.encoding)
        if (v < 0 || v >= d) throw DomainError("encoding entry out of range");
    for (int v : s.decoding)
        if (v < 0 || v >= d) throw DomainError("decoding entry out of range");
}

struct ChunkBest {
    std::int64_t total = INT64_MIN;
    int chunk = -1;
    std::vector<int> enc;
};

// Enumerate all encodings with enc[0] == chunk in mixed-radix order
// (digit 2d-1 least significant), maintaining per-(m,y) column sums and their
// maxima incrementally. Keeps the first encoding attaining the chunk maximum.
ChunkBest enumerate_chunk(const GameSpec& game,
                          const std::vector<std::int64_t>& sc, int chunk) {
    const int d = game.d;
    const int n = 2 * d;
    std::vector<int> enc(n, 0);
    enc[0] = chunk;

    // col[(y*d + m)*d + g], cellmax[y*d + m]
    std::vector<std::int64_t> col(static_cast<std::size_t>(2 * d) * d, 0);
    std::vector<std::int64_t> cellmax(static_cast<std::size_t>(2 * d), 0);
    for (int i = 0; i < n; ++i)
        for (int y = 0; y < 2; ++y) {
            const std::int64_t* row =
                &sc[(static_cast<std::size_t>(i) * 2 + y) * d];
            std::int64_t* dst =
                &col[(static_cast<std::size_t>(y) * d + enc[i]) * d];
            for (int g = 0; g < d; ++g) dst[g] += row[g];
        }
    std::int64_t total = 0;
    for (int y = 0; y < 2; ++y)
        for (int m = 0; m < d; ++m) {
            const std::int64_t* c =
                &col[(static_cast<std::size_t>(y) * d + m) * d];
            std::int64_t mx = c[0];
            for (int g = 1; g < d; ++g) mx = std::max(mx, c[g]);
            cellmax[static_cast<std::size_t>(y) * d + m] = mx;
            total += mx;
        }

    auto refresh_cell = [&](int y, int m) {
        const std::int64_t* c = &col[(static_cast<std::size_t>(y) * d + m) * d];
        std::int64_t mx = c[0];
        for (int g = 1; g < d; ++g) mx = std::max(mx, c[g]);
        std::int64_t& slot = cellmax[static_cast<std::size_t>(y) * d + m];
        total += mx - slot;
        slot = mx;
    };
    auto move_row = [&](int i, int from, int to) {
        for (int y = 0; y < 2; ++y) {
            const std::int64_t* row =
                &sc[(static_cast<std::size_t>(i) * 2 + y) * d];
            std::int64_t* src =
                &col[(static_cast<std::size_t>(y) * d + from) * d];
            std::int64_t* dst =
                &col[(static_cast<std::size_t>(y) * d + to) * d];
            for (int g = 0; g < d; ++g) {
                src[g] -= row[g];
                dst[g] += row[g];
            }
            refresh_cell(y, from);
            refresh_cell(y, to);
        }
    };

    ChunkBest best;
    best.chunk = chunk;
    for (;;) {
        if (total > best.total) {
            best.total = total;
            best.enc = enc;
        }
        int i = n - 1;
        for (; i >= 1; --i) {
            const int from = enc[i];
            const int to = (from + 1 == d) ? 0 : from + 1;
            enc[i] = to;
            move_row(i, from, to);
            if (to != 0) break;  // no carry
        }
        if (i == 0) break;  // odometer wrapped past digit 1: chunk exhausted
    }
    return best;
}

}  // namespace

double evaluate_classical(const GameSpec& game, const ClassicalStrategy& s) {
    check_tables(game, s);
    const int d = game.d;
    const auto sc = integer_scores(game);
    std::int64_t total = 0;
    for (int i = 0; i < 2 * d; ++i)
        for (int y = 0; y < 2; ++y) {
            const int g = s.decoding[s.encoding[i] * 2 + y];
            total += sc[(static_cast<std::size_t>(i) * 2 + y) * d + g];
        }
    return scaled_to_value(game, total);
}

std::pair<std::vector<int>, double> optimal_decoding(
    const GameSpec& game, const std::vector<int>& encoding) {
    const int d = game.d;
    if (encoding.size() != static_cast<std::size_t>(2 * d))
        throw DomainError("encoding must have 2d entries");
    for (int v : encoding)
        if (v < 0 || v >= d) throw DomainError("encoding entry out of range");
    const auto sc = integer_scores(game);
    std::vector<int> dec(static_cast<std::size_t>(2 * d), 0);
    const std::int64_t total = best_decoding_total(game, sc, encoding, &dec);
    return {dec, scaled_to_value(game, total)};
}

ClassicalBound exact_classical_bound(const GameSpec& game, unsigned threads) {
    const int d = game.d;
    if (d > 5)
        throw CapabilityError(
            "exact enumeration supports d <= 5 (d^(2d) encodings); use "
            "heuristic_classical_bound for larger dimensions");
    const auto sc = integer_scores(game);

    std::vector<ChunkBest> results(static_cast<std::size_t>(d));
    if (threads <= 1 || d == 1) {
        for (int c = 0; c < d; ++c) results[c] = enumerate_chunk(game, sc, c);
    } else {
        const int nt = std::min(static_cast<int>(threads), d);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&, t]() {
                for (int c = t; c < d; c += nt)
                    results[c] = enumerate_chunk(game, sc, c);
            });
        for (auto& th : pool) th.join();
    }
    // Deterministic merge: larger total wins, ties go to the lowest chunk, so
    // the witness is the first maximizing encoding in mixed-radix order.
    const ChunkBest* best = &results[0];
    for (int c = 1; c < d; ++c)
        if (results[c].total > best->total) best = &results[c];

    ClassicalBound out;
    out.value = scaled_to_value(game, best->total);
    out.witness.d = d;
    out.witness.encoding = best->enc;
    out.witness.decoding.assign(static_cast<std::size_t>(2 * d), 0);
    best_decoding_total(game, sc, best->enc, &out.witness.decoding);
    return out;
}

ClassicalBound heuristic_classical_bound(const GameSpec& game, int restarts,
                                         std::uint64_t seed) {
    const int d = game.d;
    if (restarts < 1) throw DomainError("restarts must be positive");
    const auto sc = integer_scores(game);
    const int n = 2 * d;

    std::int64_t best_total = INT64_MIN;
    std::vector<int> best_enc;
    for (int r = 0; r < restarts; ++r) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
        std::vector<int> enc(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) enc[i] = static_cast<int>(rng.uniform_int(d));
        std::int64_t cur = best_decoding_total(game, sc, enc, nullptr);
        // First-improvement coordinate ascent over encoding entries.
        bool improved = true;
        while (improved) {
            improved = false;
            for (int i = 0; i < n; ++i) {
                int keep = enc[i];
                for (int m = 0; m < d; ++m) {
                    if (m == keep) continue;
                    enc[i] = m;
                    const std::int64_t v =
                        best_decoding_total(game, sc, enc, nullptr);
                    if (v > cur) {
                        cur = v;
                        keep = m;
                        improved = true;
                    }
                }
                enc[i] = keep;
            }
        }
        if (cur > best_total) {
            best_total = cur;
            best_enc = enc;
        }
    }

    ClassicalBound out;
    out.value = scaled_to_value(game, best_total);
    out.witness.d = d;
    out.witness.encoding = best_enc;
    out.witness.decoding.assign(static_cast<std::size_t>(n), 0);
    best_decoding_total(game, sc, best_enc, &out.witness.decoding);
    return out;
}

}  // namespace qccp
