#include "optimize.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <map>
#include <set>

namespace vlcm {

namespace {

BigUint pow2m1(unsigned bits) {
    BigUint v = 1;
    v <<= bits;
    return v - 1;
}

Edge edge(ValueRef src, std::uint32_t shift) { return Edge{src, shift, false}; }

// ---- pattern descriptors -------------------------------------------------

// (node, port, relative shift, sign); ordering gives canonical patterns.
using Desc = std::tuple<NodeId, std::uint8_t, std::uint32_t, std::int8_t>;
using Key2 = std::array<Desc, 2>;
using Key3 = std::array<Desc, 3>;

Desc desc_of(const Term& t, std::uint32_t base, int flip) {
    return {t.src.node, static_cast<std::uint8_t>(t.src.port), t.shift - base,
            static_cast<std::int8_t>(t.sign * flip)};
}

const BigUint& weight_of(const McmContext& ctx, ValueRef ref) {
    auto it = ctx.weight.find(ref);
    if (it == ctx.weight.end())
        throw Error("internal: 2-input flow lost the weight of node " + std::to_string(ref.node));
    return it->second;
}

// Signed value (as a multiple of x) of a pair of terms at relative shifts.
BigUint pair_value(const McmContext& ctx, const Term& a, const Term& b, std::uint32_t base) {
    BigUint v = weight_of(ctx, a.src) << (a.shift - base);
    if (a.sign < 0) v = -v;
    BigUint w = weight_of(ctx, b.src) << (b.shift - base);
    if (b.sign < 0) w = -w;
    return v + w;
}

struct Canon2 {
    Key2 key;
    std::int8_t flip;  // occurrence sign relative to the canonical (positive) pattern
};

std::optional<Canon2> canon2(const McmContext& ctx, const Term& a, const Term& b) {
    std::uint32_t base = std::min(a.shift, b.shift);
    BigUint v = pair_value(ctx, a, b, base);
    if (v == 0) return std::nullopt;
    int flip = (v < 0) ? -1 : 1;
    Key2 key{desc_of(a, base, flip), desc_of(b, base, flip)};
    if (key[1] < key[0]) std::swap(key[0], key[1]);
    return Canon2{key, static_cast<std::int8_t>(flip)};
}

Key3 canon3(const Term& a, const Term& b, const Term& c) {
    if (a.sign < 0 || b.sign < 0 || c.sign < 0)
        throw Error("internal: CSA flows require non-negative terms");
    std::uint32_t base = std::min({a.shift, b.shift, c.shift});
    Key3 key{desc_of(a, base, 1), desc_of(b, base, 1), desc_of(c, base, 1)};
    std::sort(key.begin(), key.end());
    return key;
}

// Greedy non-overlapping matches of a 2-term pattern within one list.
std::vector<std::pair<std::size_t, std::size_t>> match2(const McmContext& ctx, const Key2& key,
                                                        const TermList& list) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::vector<bool> used(list.terms.size(), false);
    for (std::size_t i = 0; i < list.terms.size(); ++i) {
        if (used[i]) continue;
        for (std::size_t j = i + 1; j < list.terms.size(); ++j) {
            if (used[j]) continue;
            auto c = canon2(ctx, list.terms[i], list.terms[j]);
            if (c && c->key == key) {
                used[i] = used[j] = true;
                out.emplace_back(i, j);
                break;
            }
        }
    }
    return out;
}

std::vector<std::array<std::size_t, 3>> match3(const Key3& key, const TermList& list) {
    std::vector<std::array<std::size_t, 3>> out;
    std::size_t n = list.terms.size();
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        bool taken = false;
        for (std::size_t j = i + 1; j < n && !taken; ++j) {
            if (used[j]) continue;
            for (std::size_t l = j + 1; l < n && !taken; ++l) {
                if (used[l]) continue;
                if (canon3(list.terms[i], list.terms[j], list.terms[l]) == key) {
                    used[i] = used[j] = used[l] = true;
                    out.push_back({i, j, l});
                    taken = true;
                }
            }
        }
    }
    return out;
}

void erase_and_insert(TermList& list, std::vector<std::size_t> remove, std::vector<Term> add) {
    std::sort(remove.begin(), remove.end(), std::greater<>());
    for (std::size_t idx : remove) list.terms.erase(list.terms.begin() + idx);
    for (const Term& t : add) list.terms.push_back(t);
}

}  // namespace

McmContext make_mcm_context(Dfg& g, const std::string& input_name, unsigned iw) {
    if (iw == 0) throw ConfigError("input bit-width must be at least 1");
    McmContext ctx;
    ctx.g = &g;
    ctx.iw = iw;
    ctx.x = g.add_input(input_name, iw);
    ctx.x_max = pow2m1(iw);
    ctx.weight[{ctx.x, Port::Out}] = 1;
    return ctx;
}

TermList digit_terms(const McmContext& ctx, const BigUint& c, Repr repr) {
    SignedDigitString digits = (repr == Repr::Binary) ? binary_digits(c) : csd_recode(c);
    TermList out;
    for (std::size_t k = 0; k < digits.digits.size(); ++k)
        if (digits.digits[k] != 0)
            out.terms.push_back({{ctx.x, Port::Out}, static_cast<std::uint32_t>(k),
                                 digits.digits[k]});
    return out;
}

// ---- 2-term extraction ---------------------------------------------------

void extract_2term(McmContext& ctx, std::vector<TermList>& lists) {
    for (;;) {
        std::map<Key2, int> raw;
        for (const TermList& list : lists)
            for (std::size_t i = 0; i < list.terms.size(); ++i)
                for (std::size_t j = i + 1; j < list.terms.size(); ++j)
                    if (auto c = canon2(ctx, list.terms[i], list.terms[j])) raw[c->key]++;

        std::vector<std::pair<int, Key2>> cands;
        for (const auto& [key, count] : raw)
            if (count >= 2) cands.push_back({count, key});
        std::sort(cands.begin(), cands.end(),
                  [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                  });

        std::optional<Key2> best;
        std::size_t best_count = 1;
        unsigned best_width = 0;
        for (const auto& [rawcount, key] : cands) {
            if (static_cast<std::size_t>(rawcount) < std::max<std::size_t>(best_count, 2)) break;
            std::size_t g = 0;
            for (const TermList& list : lists) g += match2(ctx, key, list).size();
            if (g < 2) continue;
            // realized width for the tie-break
            Term a{{std::get<0>(key[0]), static_cast<Port>(std::get<1>(key[0]))},
                   std::get<2>(key[0]), std::get<3>(key[0])};
            Term b{{std::get<0>(key[1]), static_cast<Port>(std::get<1>(key[1]))},
                   std::get<2>(key[1]), std::get<3>(key[1])};
            unsigned width = bit_width(BigUint(pair_value(ctx, a, b, 0) * ctx.x_max));
            if (!best || g > best_count ||
                (g == best_count &&
                 (width < best_width || (width == best_width && key < *best)))) {
                best = key;
                best_count = g;
                best_width = width;
            }
        }
        if (!best) return;

        // realize the pattern once
        const Key2& key = *best;
        Term a{{std::get<0>(key[0]), static_cast<Port>(std::get<1>(key[0]))}, std::get<2>(key[0]),
               std::get<3>(key[0])};
        Term b{{std::get<0>(key[1]), static_cast<Port>(std::get<1>(key[1]))}, std::get<2>(key[1]),
               std::get<3>(key[1])};
        BigUint value = pair_value(ctx, a, b, 0);
        assert(value > 0);
        NodeId node;
        if (a.sign > 0 && b.sign > 0) {
            node = ctx.g->add_add2(edge(a.src, a.shift), edge(b.src, b.shift));
        } else {
            const Term& pos = (a.sign > 0) ? a : b;
            const Term& neg = (a.sign > 0) ? b : a;
            node = ctx.g->add_sub2(edge(pos.src, pos.shift), edge(neg.src, neg.shift),
                                   BigUint(value * ctx.x_max));
        }
        ctx.weight[{node, Port::Out}] = value;

        for (TermList& list : lists) {
            auto matches = match2(ctx, key, list);
            std::vector<std::size_t> remove;
            std::vector<Term> add;
            for (auto [i, j] : matches) {
                std::uint32_t base = std::min(list.terms[i].shift, list.terms[j].shift);
                auto c = canon2(ctx, list.terms[i], list.terms[j]);
                remove.push_back(i);
                remove.push_back(j);
                add.push_back({{node, Port::Out}, base, c->flip});
            }
            erase_and_insert(list, std::move(remove), std::move(add));
        }
    }
}

// ---- 3-term extraction ---------------------------------------------------

void extract_3term(McmContext& ctx, std::vector<TermList>& lists) {
    for (;;) {
        std::map<Key3, int> raw;
        for (const TermList& list : lists) {
            std::size_t n = list.terms.size();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    for (std::size_t l = j + 1; l < n; ++l)
                        raw[canon3(list.terms[i], list.terms[j], list.terms[l])]++;
        }

        std::vector<std::pair<int, Key3>> cands;
        for (const auto& [key, count] : raw)
            if (count >= 2) cands.push_back({count, key});
        std::sort(cands.begin(), cands.end(),
                  [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                  });

        std::optional<Key3> best;
        std::size_t best_count = 1;
        unsigned best_width = 0;
        for (const auto& [rawcount, key] : cands) {
            if (static_cast<std::size_t>(rawcount) < std::max<std::size_t>(best_count, 2)) break;
            std::size_t g = 0;
            for (const TermList& list : lists) g += match3(key, list).size();
            if (g < 2) continue;
            unsigned width = 0;
            for (const Desc& d : key) {
                ValueRef ref{std::get<0>(d), static_cast<Port>(std::get<1>(d))};
                width = std::max(width, bit_width(BigUint(ctx.g->bound(ref) << std::get<2>(d))));
            }
            if (!best || g > best_count ||
                (g == best_count &&
                 (width < best_width || (width == best_width && key < *best)))) {
                best = key;
                best_count = g;
                best_width = width;
            }
        }
        if (!best) return;

        const Key3& key = *best;
        std::array<Edge, 3> ops;
        for (std::size_t k = 0; k < 3; ++k)
            ops[k] = edge({std::get<0>(key[k]), static_cast<Port>(std::get<1>(key[k]))},
                          std::get<2>(key[k]));
        NodeId node = ctx.g->add_csa(ops[0], ops[1], ops[2]);

        for (TermList& list : lists) {
            auto matches = match3(key, list);
            std::vector<std::size_t> remove;
            std::vector<Term> add;
            for (const auto& m : matches) {
                std::uint32_t base = std::min(
                    {list.terms[m[0]].shift, list.terms[m[1]].shift, list.terms[m[2]].shift});
                remove.insert(remove.end(), m.begin(), m.end());
                add.push_back({{node, Port::Sum}, base, 1});
                add.push_back({{node, Port::Carry}, base, 1});
            }
            erase_and_insert(list, std::move(remove), std::move(add));
        }
    }
}

// ---- summation trees -----------------------------------------------------

namespace {

struct TreeItem {
    ValueRef ref;
    std::uint32_t shift;
    BigUint weight;  // multiple of x carried by ref alone
};

TreeItem combine_add(McmContext& ctx, const TreeItem& a, const TreeItem& b) {
    std::uint32_t base = std::min(a.shift, b.shift);
    NodeId node =
        ctx.g->add_add2(edge(a.ref, a.shift - base), edge(b.ref, b.shift - base));
    BigUint w = (a.weight << (a.shift - base)) + (b.weight << (b.shift - base));
    ctx.weight[{node, Port::Out}] = w;
    return {{node, Port::Out}, base, w};
}

TreeItem balanced_tree(McmContext& ctx, std::vector<TreeItem> items) {
    while (items.size() > 1) {
        std::sort(items.begin(), items.end(), [](const TreeItem& a, const TreeItem& b) {
            BigUint va = a.weight << a.shift, vb = b.weight << b.shift;
            if (va != vb) return va < vb;
            return std::tie(a.ref.node, a.ref.port, a.shift) <
                   std::tie(b.ref.node, b.ref.port, b.shift);
        });
        std::vector<TreeItem> next;
        for (std::size_t i = 0; i + 1 < items.size(); i += 2)
            next.push_back(combine_add(ctx, items[i], items[i + 1]));
        if (items.size() % 2 == 1) next.push_back(items.back());
        items = std::move(next);
    }
    return items.front();
}

}  // namespace

OutputHalf sum_terms_tree(McmContext& ctx, const TermList& terms) {
    if (terms.terms.empty()) throw Error("cannot sum an empty term list");
    std::vector<TreeItem> pos, neg;
    for (const Term& t : terms.terms) {
        TreeItem item{t.src, t.shift, weight_of(ctx, t.src)};
        (t.sign > 0 ? pos : neg).push_back(item);
    }
    if (pos.empty()) throw Error("term list sums to a negative value");
    TreeItem p = balanced_tree(ctx, std::move(pos));
    if (neg.empty()) return {p.ref, p.shift};
    TreeItem n = balanced_tree(ctx, std::move(neg));
    BigUint pv = p.weight << p.shift, nv = n.weight << n.shift;
    if (pv <= nv) throw Error("term list sums to a non-positive value");
    std::uint32_t base = std::min(p.shift, n.shift);
    BigUint w = (p.weight << (p.shift - base)) - (n.weight << (n.shift - base));
    NodeId node = ctx.g->add_sub2(edge(p.ref, p.shift - base), edge(n.ref, n.shift - base),
                                  BigUint(w * ctx.x_max));
    ctx.weight[{node, Port::Out}] = w;
    return {{node, Port::Out}, base};
}

SumCarry csa_reduce(McmContext& ctx, const TermList& terms, std::size_t* csa_count) {
    struct Item {
        ValueRef ref;
        std::uint32_t shift;
    };
    std::vector<Item> pool;
    for (const Term& t : terms.terms) {
        if (t.sign < 0) throw Error("CSA reduction requires non-negative terms");
        pool.push_back({t.src, t.shift});
    }
    if (pool.empty()) throw Error("cannot reduce an empty term list");
    std::size_t count = 0;
    auto item_key = [&](const Item& it) {
        return std::make_tuple(bit_width(BigUint(ctx.g->bound(it.ref) << it.shift)), it.ref.node,
                               static_cast<int>(it.ref.port), it.shift);
    };
    while (pool.size() > 2) {
        std::sort(pool.begin(), pool.end(),
                  [&](const Item& a, const Item& b) { return item_key(a) < item_key(b); });
        Item a = pool[0], b = pool[1], c = pool[2];
        pool.erase(pool.begin(), pool.begin() + 3);
        std::uint32_t base = std::min({a.shift, b.shift, c.shift});
        NodeId node = ctx.g->add_csa(edge(a.ref, a.shift - base), edge(b.ref, b.shift - base),
                                     edge(c.ref, c.shift - base));
        pool.push_back({{node, Port::Sum}, base});
        pool.push_back({{node, Port::Carry}, base});
        ++count;
    }
    if (csa_count) *csa_count = count;
    std::sort(pool.begin(), pool.end(),
              [&](const Item& a, const Item& b) { return item_key(a) < item_key(b); });
    SumCarry out;
    out.sum = {pool[0].ref, pool[0].shift};
    if (pool.size() == 2) out.carry = OutputHalf{pool[1].ref, pool[1].shift};
    return out;
}

std::pair<SumCarry, std::size_t> csa_tree_reduce(Dfg& g, const TermList& terms) {
    McmContext ctx;  // bounds-only use: no input/weights required
    ctx.g = &g;
    std::size_t count = 0;
    SumCarry sc = csa_reduce(ctx, terms, &count);
    return {sc, count};
}

// ---- graph-based synthesis ------------------------------------------------

namespace {

class GbPlanner {
  public:
    explicit GbPlanner(std::vector<BigUint> targets) : targets_(std::move(targets)) {
        ready_.insert(1);
    }

    std::vector<GbOp> plan() {
        std::set<BigUint> remaining(targets_.begin(), targets_.end());
        remaining.erase(BigUint(1));
        std::size_t guard = 0;
        for (const BigUint& t : remaining) guard += nnz(t) + 4;
        while (!remaining.empty()) {
            bool changed = true;
            while (changed) {
                changed = false;
                for (auto it = remaining.begin(); it != remaining.end();) {
                    if (auto op = find_one_op(*it)) {
                        emit(*op);
                        it = remaining.erase(it);
                        changed = true;
                    } else {
                        ++it;
                    }
                }
            }
            if (remaining.empty()) break;
            if (guard-- == 0) throw Error("internal: graph-based synthesis failed to converge");
            stuck_step(remaining);
        }
        // never worse than plain recoded chains
        std::size_t dbr_total = 0;
        for (const BigUint& t : targets_)
            if (t != 1) dbr_total += nnz(t) - 1;
        if (ops_.size() > dbr_total) return horner_only_plan();
        return ops_;
    }

  private:
    unsigned nnz(const BigUint& v) {
        auto it = nnz_cache_.find(v);
        if (it != nnz_cache_.end()) return it->second;
        unsigned n = csd_recode(v).nonzero_count();
        nnz_cache_[v] = n;
        return n;
    }

    void emit(const GbOp& op) {
        ops_.push_back(op);
        ready_.insert(op.result);
    }

    std::optional<GbOp> find_one_op(const BigUint& t) const {
        const BigUint& max_ready = *ready_.rbegin();
        BigUint limit = t + max_ready;
        for (const BigUint& a : ready_) {
            BigUint v = a << 1;
            for (unsigned s = 1; v <= limit; ++s, v <<= 1) {
                if (v < t && ready_.count(t - v)) return GbOp{t, a, s, t - v, 0, false};
                if (v > t && ready_.count(v - t)) return GbOp{t, a, s, v - t, 0, true};
                if (ready_.count(t + v)) return GbOp{t, t + v, 0, a, s, true};
            }
        }
        return std::nullopt;
    }

    unsigned cost_proxy(const BigUint& u, const BigUint* extra) {
        if (u == 1 || ready_.count(u) || (extra && u == *extra)) return 0;
        return std::max(1u, nnz(u) - 1);
    }

    // residual values completing t in one more operation via partner a
    void residuals_for(const BigUint& t, const BigUint& a, std::vector<BigUint>& out) const {
        BigUint v = a;
        BigUint limit = t << 2;
        for (unsigned s = 0; v <= limit; ++s, v <<= 1) {
            unsigned tz;
            if (v != t) {
                BigUint d = (v < t) ? BigUint(t - v) : BigUint(v - t);
                out.push_back(odd_part(d, tz));
            }
            out.push_back(odd_part(BigUint(t + v), tz));
        }
    }

    // adder-distance estimate from the ready set alone (no candidate)
    unsigned est_base(const BigUint& t) {
        unsigned best = std::max(2u, nnz(t) - 1);
        std::vector<BigUint> res;
        for (const BigUint& a : ready_) residuals_for(t, a, res);
        for (const BigUint& u : res) {
            if (u == 0) continue;
            best = std::min(best, 1 + cost_proxy(u, nullptr));
            if (best == 2) break;
        }
        return best;
    }

    // how the estimate improves when cand joins the ready set
    unsigned est_with(const BigUint& t, const BigUint& cand, unsigned base) {
        unsigned best = base;
        std::vector<BigUint> res;
        residuals_for(t, cand, res);
        for (const BigUint& u : res) {
            if (u == 0) continue;
            best = std::min(best, 1 + cost_proxy(u, &cand));
            if (best == 1) break;
        }
        return best;
    }

    void stuck_step(const std::set<BigUint>& remaining) {
        unsigned width_limit = 2;
        for (const BigUint& t : remaining) width_limit = std::max(width_limit, bit_width(t) + 2);
        BigUint value_limit = BigUint(1) << width_limit;

        // everything one operation away from the ready set, bounded
        std::set<BigUint> successors;
        const BigUint& max_ready = *ready_.rbegin();
        for (const BigUint& a : ready_) {
            BigUint v = a << 1;
            for (unsigned s = 1; v <= value_limit + max_ready; ++s, v <<= 1) {
                for (const BigUint& b : ready_) {
                    BigUint u = v + b;
                    if (u <= value_limit && !ready_.count(u)) successors.insert(u);
                    if (v != b) {
                        u = (v > b) ? BigUint(v - b) : BigUint(b - v);
                        if (mpz_odd_p(u.get_mpz_t()) && u > 1 && u <= value_limit &&
                            !ready_.count(u))
                            successors.insert(u);
                    }
                }
            }
        }

        // candidate intermediates: residuals that complete a target and are
        // themselves one operation away right now
        std::map<BigUint, std::set<BigUint>> completes;  // candidate -> targets
        std::vector<BigUint> res;
        for (const BigUint& t : remaining) {
            res.clear();
            for (const BigUint& a : ready_) residuals_for(t, a, res);
            // divisor forms t = u*(2^s +/- 1), where u pairs with itself
            for (unsigned s = 1; (BigUint(1) << s) <= t + 1; ++s) {
                BigUint d1 = (BigUint(1) << s) + 1;
                if (mpz_divisible_p(t.get_mpz_t(), d1.get_mpz_t())) res.push_back(t / d1);
                BigUint d2 = (BigUint(1) << s) - 1;
                if (d2 > 1 && mpz_divisible_p(t.get_mpz_t(), d2.get_mpz_t()))
                    res.push_back(t / d2);
            }
            for (const BigUint& u : res)
                if (u >= 3 && bit_width(u) <= width_limit && successors.count(u))
                    completes[u].insert(t);
        }

        // keep the scoring pass small: candidates completing the most targets
        // first, smaller values breaking ties
        std::vector<const std::pair<const BigUint, std::set<BigUint>>*> cands;
        for (const auto& entry : completes) cands.push_back(&entry);
        std::stable_sort(cands.begin(), cands.end(), [](const auto* a, const auto* b) {
            if (a->second.size() != b->second.size()) return a->second.size() > b->second.size();
            return a->first < b->first;
        });
        if (cands.size() > 200) cands.resize(200);

        std::map<BigUint, unsigned> base_est;
        for (const BigUint& t : remaining) base_est[t] = est_base(t);

        BigUint best_cand;
        std::size_t best_score = 0;
        bool have = false;
        for (const auto* entry : cands) {
            const BigUint& cand = entry->first;
            const std::set<BigUint>& done = entry->second;
            std::size_t score = 0;
            for (const BigUint& t : remaining) {
                if (done.count(t))
                    score += 1;
                else
                    score += est_with(t, cand, base_est.at(t));
            }
            if (!have || score < best_score || (score == best_score && cand < best_cand)) {
                have = true;
                best_score = score;
                best_cand = cand;
            }
        }
        if (have) {
            auto op = find_one_op(best_cand);
            if (!op) throw Error("internal: candidate lost its one-operation realization");
            emit(*op);
            return;
        }

        // fall back to the next canonical-recoding prefix of the cheapest target
        const BigUint* pick = nullptr;
        for (const BigUint& t : remaining)
            if (!pick || std::make_pair(nnz(t), t) < std::make_pair(nnz(*pick), *pick))
                pick = &t;
        emit(next_horner_prefix(*pick));
    }

    // Builds t from its NAF digits most-significant first; returns the op for
    // the first prefix value not yet in the ready set.
    GbOp next_horner_prefix(const BigUint& t) {
        SignedDigitString d = csd_recode(t);
        std::vector<std::pair<unsigned, int>> nz;  // (position, sign), LSB first
        for (std::size_t k = 0; k < d.digits.size(); ++k)
            if (d.digits[k] != 0) nz.push_back({static_cast<unsigned>(k), d.digits[k]});
        BigUint w = 1;
        for (std::size_t k = nz.size() - 1; k-- > 0;) {
            unsigned gap = nz[k + 1].first - nz[k].first;
            BigUint next = (w << gap) + nz[k].second;
            if (!ready_.count(next)) {
                if (nz[k].second > 0) return GbOp{next, w, gap, 1, 0, false};
                return GbOp{next, w, gap, 1, 0, true};
            }
            w = next;
        }
        throw Error("internal: target already realized");
    }

    std::vector<GbOp> horner_only_plan() {
        ops_.clear();
        ready_.clear();
        ready_.insert(1);
        for (const BigUint& t : targets_) {
            if (t == 1) continue;
            while (!ready_.count(t)) emit(next_horner_prefix(t));
        }
        return ops_;
    }

    std::vector<BigUint> targets_;
    std::set<BigUint> ready_;
    std::vector<GbOp> ops_;
    std::map<BigUint, unsigned> nnz_cache_;
};

}  // namespace

std::vector<GbOp> gb_plan(const std::vector<BigUint>& odd_targets) {
    for (const BigUint& t : odd_targets) {
        if (t <= 0 || mpz_even_p(t.get_mpz_t()))
            throw Error("graph-based synthesis expects positive odd targets");
        if (bit_width(t) > kGbWidthLimit)
            throw ConfigError("constant " + to_hex(t) + " is " + std::to_string(bit_width(t)) +
                              " bits wide; the graph-based stage supports at most " +
                              std::to_string(kGbWidthLimit) +
                              " bits — choose a smaller partition width p");
    }
    std::vector<BigUint> dedup = odd_targets;
    std::sort(dedup.begin(), dedup.end());
    dedup.erase(std::unique(dedup.begin(), dedup.end()), dedup.end());
    return GbPlanner(dedup).plan();
}

std::map<BigUint, ValueRef> gb_realize(McmContext& ctx, const std::vector<BigUint>& odd_values) {
    std::map<BigUint, ValueRef> out;
    out[1] = {ctx.x, Port::Out};
    for (const GbOp& op : gb_plan(odd_values)) {
        ValueRef lhs = out.at(op.lhs), rhs = out.at(op.rhs);
        NodeId node;
        if (op.subtract)
            node = ctx.g->add_sub2(edge(lhs, op.lhs_shift), edge(rhs, op.rhs_shift),
                                   BigUint(op.result * ctx.x_max));
        else
            node = ctx.g->add_add2(edge(lhs, op.lhs_shift), edge(rhs, op.rhs_shift));
        ctx.weight[{node, Port::Out}] = op.result;
        out[op.result] = {node, Port::Out};
    }
    return out;
}

std::map<BigUint, SumCarry> cse3_realize(McmContext& ctx, const std::vector<BigUint>& odd_values) {
    std::vector<BigUint> values = odd_values;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<TermList> lists;
    std::vector<BigUint> listed;
    for (const BigUint& v : values) {
        if (v == 1) continue;
        lists.push_back(digit_terms(ctx, v, Repr::Binary));
        listed.push_back(v);
    }
    extract_3term(ctx, lists);

    std::map<BigUint, SumCarry> out;
    out[1] = SumCarry{{{ctx.x, Port::Out}, 0}, std::nullopt};
    for (std::size_t i = 0; i < lists.size(); ++i)
        out[listed[i]] = csa_reduce(ctx, lists[i]);
    return out;
}

// ---- public whole-graph operations ----------------------------------------

namespace {

void require_nonzero(const std::vector<BigUint>& constants) {
    if (constants.empty()) throw ConfigError("constant list is empty");
    for (const BigUint& c : constants)
        if (c == 0) throw ConfigError("constant 0 cannot be realized");
}

std::string output_name(std::size_t i) { return "y" + std::to_string(i); }

}  // namespace

Dfg dbr_2input(const std::vector<BigUint>& constants, Repr repr, unsigned iw) {
    require_nonzero(constants);
    Dfg g;
    McmContext ctx = make_mcm_context(g, "x", iw);
    for (std::size_t i = 0; i < constants.size(); ++i) {
        TermList terms = digit_terms(ctx, constants[i], repr);
        OutputHalf half = (terms.terms.size() == 1)
                              ? OutputHalf{terms.terms[0].src, terms.terms[0].shift}
                              : sum_terms_tree(ctx, terms);
        g.bind_output(output_name(i), half, std::nullopt, BigUint(constants[i] * ctx.x_max));
    }
    return g;
}

Dfg dbr_csa(const std::vector<BigUint>& constants, Repr repr, unsigned iw) {
    require_nonzero(constants);
    if (repr != Repr::Binary)
        throw ConfigError(
            "the carry-save digit recoding works on the binary representation; signed digits "
            "would introduce negative CSA operands");
    Dfg g;
    McmContext ctx = make_mcm_context(g, "x", iw);
    for (std::size_t i = 0; i < constants.size(); ++i) {
        TermList terms = digit_terms(ctx, constants[i], repr);
        SumCarry sc = csa_reduce(ctx, terms);
        g.bind_output(output_name(i), sc.sum, sc.carry, BigUint(constants[i] * ctx.x_max));
    }
    return g;
}

Dfg cse_2term(const std::vector<BigUint>& constants, Repr repr, unsigned iw) {
    require_nonzero(constants);
    Dfg g;
    McmContext ctx = make_mcm_context(g, "x", iw);
    std::vector<TermList> lists;
    for (const BigUint& c : constants) lists.push_back(digit_terms(ctx, c, repr));
    extract_2term(ctx, lists);
    for (std::size_t i = 0; i < constants.size(); ++i) {
        OutputHalf half = (lists[i].terms.size() == 1 && lists[i].terms[0].sign > 0)
                              ? OutputHalf{lists[i].terms[0].src, lists[i].terms[0].shift}
                              : sum_terms_tree(ctx, lists[i]);
        g.bind_output(output_name(i), half, std::nullopt, BigUint(constants[i] * ctx.x_max));
    }
    return g;
}

Dfg cse_3term(const std::vector<BigUint>& constants, unsigned iw) {
    require_nonzero(constants);
    Dfg g;
    McmContext ctx = make_mcm_context(g, "x", iw);
    std::vector<TermList> lists;
    for (const BigUint& c : constants) lists.push_back(digit_terms(ctx, c, Repr::Binary));
    extract_3term(ctx, lists);
    for (std::size_t i = 0; i < constants.size(); ++i) {
        SumCarry sc = csa_reduce(ctx, lists[i]);
        g.bind_output(output_name(i), sc.sum, sc.carry, BigUint(constants[i] * ctx.x_max));
    }
    return g;
}

Dfg gb_mcm(const std::vector<BigUint>& targets, unsigned iw) {
    require_nonzero(targets);
    Dfg g;
    McmContext ctx = make_mcm_context(g, "x", iw);
    std::vector<BigUint> odd;
    std::vector<unsigned> shifts;
    for (const BigUint& t : targets) {
        unsigned tz;
        odd.push_back(odd_part(t, tz));
        shifts.push_back(tz);
    }
    auto realized = gb_realize(ctx, odd);
    for (std::size_t i = 0; i < targets.size(); ++i)
        g.bind_output(output_name(i), {realized.at(odd[i]), shifts[i]}, std::nullopt,
                      BigUint(targets[i] * ctx.x_max));
    return g;
}

}  // namespace vlcm
