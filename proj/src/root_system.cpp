#include "fschubert/root_system.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <set>

#include "fschubert/errors.hpp"

namespace fschubert {

std::string to_string(LatticeKind k) {
    switch (k) {
    case LatticeKind::SimplyConnected: return "sc";
    case LatticeKind::Adjoint: return "ad";
    case LatticeKind::Custom: return "custom";
    }
    return "custom";
}

namespace {

// Kac matrix A_ij = α_i^∨(α_j) for one irreducible Bourbaki type.
IntMatrix kac_matrix(char type, std::size_t n) {
    auto bad = [&] { throw ValidationError(std::string("invalid Dynkin label ") + type + std::to_string(n)); };
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = 2;
    auto link = [&](std::size_t i, std::size_t j) { a(i, j) = a(j, i) = -1; };
    switch (type) {
    case 'A':
        if (n < 1) bad();
        for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1);
        break;
    case 'B':
        if (n < 2) bad();
        for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1);
        a(n - 1, n - 2) = -2;
        break;
    case 'C':
        if (n < 2) bad();
        for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1);
        a(n - 2, n - 1) = -2;
        break;
    case 'D':
        if (n < 4) bad();
        for (std::size_t i = 0; i + 2 < n; ++i) link(i, i + 1);
        link(n - 3, n - 1);
        break;
    case 'E':
        if (n < 6 || n > 8) bad();
        link(0, 2);
        link(1, 3);
        for (std::size_t i = 2; i + 1 < n; ++i) link(i, i + 1);
        break;
    case 'F':
        if (n != 4) bad();
        link(0, 1);
        link(1, 2);
        link(2, 3);
        a(2, 1) = -2;
        break;
    case 'G':
        if (n != 2) bad();
        a(0, 1) = -3;
        a(1, 0) = -1;
        break;
    default: bad();
    }
    return a;
}

std::vector<std::pair<char, std::size_t>> parse_label(const std::string& label) {
    std::vector<std::pair<char, std::size_t>> parts;
    std::size_t pos = 0;
    while (pos < label.size()) {
        std::size_t end = label.find('x', pos);
        if (end == std::string::npos) end = label.size();
        std::string part = label.substr(pos, end - pos);
        if (part.size() < 2 || !std::isupper(static_cast<unsigned char>(part[0])))
            throw ValidationError("invalid Dynkin label: " + label);
        std::size_t n = 0;
        for (std::size_t k = 1; k < part.size(); ++k) {
            if (!std::isdigit(static_cast<unsigned char>(part[k])))
                throw ValidationError("invalid Dynkin label: " + label);
            n = n * 10 + static_cast<std::size_t>(part[k] - '0');
            if (n > 32) throw ValidationError("rank too large in label: " + label);
        }
        parts.emplace_back(part[0], n);
        pos = end + 1;
    }
    if (parts.empty()) throw ValidationError("empty Dynkin label");
    return parts;
}

// Classify an irreducible component of a finite-type Cartan matrix.
std::string classify(const IntMatrix& c, const std::vector<std::size_t>& nodes) {
    const std::size_t n = nodes.size();
    if (n == 1) return "A1";
    std::vector<std::vector<std::size_t>> adj(n);
    std::size_t multi_i = n, multi_j = n;
    int bond = 1;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b || c(nodes[a], nodes[b]) == 0) continue;
            adj[a].push_back(b);
            auto prod = c(nodes[a], nodes[b]) * c(nodes[b], nodes[a]);
            if (prod > 1 && a < b) {
                bond = static_cast<int>(prod);
                multi_i = a;
                multi_j = b;
            }
        }
    if (bond == 3) return "G2";
    std::size_t branch = n;
    for (std::size_t a = 0; a < n; ++a)
        if (adj[a].size() == 3) branch = a;
    if (bond == 1 && branch == n) return "A" + std::to_string(n);
    if (bond == 1) {
        // Leg lengths from the branch node.
        std::vector<std::size_t> legs;
        for (auto start : adj[branch]) {
            std::size_t len = 1, prev = branch, cur = start;
            while (adj[cur].size() == 2) {
                std::size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
                prev = cur;
                cur = next;
                ++len;
            }
            legs.push_back(len);
        }
        std::sort(legs.begin(), legs.end());
        if (legs[0] == 1 && legs[1] == 1) return "D" + std::to_string(n);
        return "E" + std::to_string(n);
    }
    if (n == 2) return "B2";
    bool end_bond = adj[multi_i].size() == 1 || adj[multi_j].size() == 1;
    if (!end_bond) return "F4";
    std::size_t end = adj[multi_i].size() == 1 ? multi_i : multi_j;
    std::size_t other = end == multi_i ? multi_j : multi_i;
    // C_ij = α_j^∨(α_i); |C| = 2 at (i, j) means α_j is short relative to α_i.
    bool end_short = std::abs(c(nodes[other], nodes[end])) == 2;
    return (end_short ? "B" : "C") + std::to_string(n);
}

std::vector<int> prime_factors(std::int64_t m) {
    std::vector<int> out;
    for (std::int64_t p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            out.push_back(static_cast<int>(p));
            while (m % p == 0) m /= p;
        }
    if (m > 1) out.push_back(static_cast<int>(m));
    return out;
}

} // namespace

std::int64_t RootDatum::pair(std::span<const std::int64_t> covector, std::span<const std::int64_t> v) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += covector[i] * v[i];
    return s;
}

RootDatumPtr RootDatum::from_type(const std::string& label, LatticeKind kind) {
    auto parts = parse_label(label);
    std::size_t n = 0;
    for (auto& [t, r] : parts) n += r;
    IntMatrix kac(n, n);
    std::size_t off = 0;
    for (auto& [t, r] : parts) {
        IntMatrix block = kac_matrix(t, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) kac(off + i, off + j) = block(i, j);
        off += r;
    }
    std::vector<LatticeVector> roots(n, LatticeVector(n, 0)), coroots(n, LatticeVector(n, 0));
    if (kind == LatticeKind::SimplyConnected) {
        // Basis of fundamental weights: α_i = Σ_j α_j^∨(α_i) ω_j.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) roots[i][j] = kac(j, i);
            coroots[i][i] = 1;
        }
    } else if (kind == LatticeKind::Adjoint) {
        for (std::size_t i = 0; i < n; ++i) {
            roots[i][i] = 1;
            coroots[i] = kac.row(i);
        }
    } else {
        throw UsageError("from_type needs the sc or ad lattice");
    }
    std::shared_ptr<RootDatum> rd(new RootDatum());
    rd->kind_ = kind;
    rd->label_ = label;
    rd->build(roots, coroots);
    return rd;
}

RootDatumPtr RootDatum::from_matrices(const std::vector<LatticeVector>& simple_roots,
                                      const std::vector<LatticeVector>& simple_coroots) {
    std::shared_ptr<RootDatum> rd(new RootDatum());
    rd->kind_ = LatticeKind::Custom;
    rd->build(simple_roots, simple_coroots);
    std::string lab;
    for (auto& c : rd->components_) lab += (lab.empty() ? "" : "x") + c;
    rd->label_ = lab;
    return rd;
}

void RootDatum::build(const std::vector<LatticeVector>& roots, const std::vector<LatticeVector>& coroots) {
    const std::size_t n = roots.size();
    if (n == 0) throw ValidationError("root datum needs at least one simple root");
    if (coroots.size() != n) throw ValidationError("number of simple roots and coroots differ");
    for (std::size_t i = 0; i < n; ++i) {
        if (roots[i].size() != n)
            throw ValidationError("simple roots must be vectors of length equal to the rank (semisimple datum)");
        if (coroots[i].size() != n) throw ValidationError("simple coroots must have length equal to the rank");
    }
    simple_roots_ = roots;
    simple_coroots_ = coroots;
    IntMatrix rm = IntMatrix::from_rows(roots, n);
    if (rank_over_q(rm) != n) throw ValidationError("simple roots are linearly dependent");
    if (rank_over_q(IntMatrix::from_rows(coroots, n)) != n)
        throw ValidationError("simple coroots are linearly dependent");

    cartan_ = IntMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cartan_(i, j) = pair(coroots[j], roots[i]);
    for (std::size_t i = 0; i < n; ++i) {
        if (cartan_(i, i) != 2) throw ValidationError("α_i^∨(α_i) must equal 2 for every i");
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (cartan_(i, j) > 0) throw ValidationError("off-diagonal Cartan entries must be non-positive");
            if ((cartan_(i, j) == 0) != (cartan_(j, i) == 0))
                throw ValidationError("Cartan matrix zero pattern is not symmetric");
        }
    }
    if (n <= 20 && !all_principal_minors_positive(cartan_))
        throw ValidationError("Cartan matrix is not of finite type");

    // Irreducible components.
    std::vector<int> comp(n, -1);
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        int id = static_cast<int>(component_nodes_.size());
        component_nodes_.emplace_back();
        std::deque<std::size_t> q{s};
        comp[s] = id;
        while (!q.empty()) {
            auto a = q.front();
            q.pop_front();
            component_nodes_[id].push_back(a);
            for (std::size_t b = 0; b < n; ++b)
                if (comp[b] < 0 && cartan_(a, b) != 0) {
                    comp[b] = id;
                    q.push_back(b);
                }
        }
        std::sort(component_nodes_[id].begin(), component_nodes_[id].end());
        components_.push_back(classify(cartan_, component_nodes_[id]));
    }

    reflections_.clear();
    for (std::size_t i = 0; i < n; ++i) {
        IntMatrix s = IntMatrix::identity(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) s(r, c) -= roots[i][r] * coroots[i][c];
        reflections_.push_back(std::move(s));
    }

    // Close the simple roots under simple reflections, tracking coroots.
    std::map<LatticeVector, Root> found;
    std::deque<LatticeVector> queue;
    for (std::size_t i = 0; i < n; ++i) {
        Root r;
        r.coords = roots[i];
        r.simple = LatticeVector(n, 0);
        r.simple[i] = 1;
        r.coroot = coroots[i];
        r.height = 1;
        found.emplace(r.coords, r);
        queue.push_back(r.coords);
    }
    while (!queue.empty()) {
        Root cur = found.at(queue.front());
        queue.pop_front();
        for (std::size_t j = 0; j < n; ++j) {
            Root nx;
            std::int64_t k = pair(coroots[j], cur.coords);
            nx.coords = cur.coords;
            for (std::size_t r = 0; r < n; ++r) nx.coords[r] -= k * roots[j][r];
            if (found.count(nx.coords)) continue;
            nx.simple = cur.simple;
            nx.simple[j] -= k;
            // β^∨ ∘ s_j
            nx.coroot = LatticeVector(n, 0);
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t r = 0; r < n; ++r) nx.coroot[c] += cur.coroot[r] * reflections_[j](r, c);
            nx.height = std::accumulate(nx.simple.begin(), nx.simple.end(), std::int64_t{0});
            found.emplace(nx.coords, nx);
            queue.push_back(nx.coords);
            if (found.size() > 100000) throw ValidationError("root system is not finite");
        }
    }
    std::vector<Root> pos;
    for (auto& [k, r] : found) {
        bool p = std::all_of(r.simple.begin(), r.simple.end(), [](auto v) { return v >= 0; });
        bool m = std::all_of(r.simple.begin(), r.simple.end(), [](auto v) { return v <= 0; });
        if (!p && !m) throw ValidationError("root with mixed-sign simple coordinates");
        if (p) pos.push_back(r);
    }
    std::sort(pos.begin(), pos.end(), [](const Root& a, const Root& b) {
        if (a.height != b.height) return a.height < b.height;
        return a.simple > b.simple;
    });
    if (pos.size() * 2 != found.size()) throw ValidationError("root system is not symmetric under negation");
    roots_ = pos;
    for (auto& r : pos) {
        Root neg = r;
        for (auto& v : neg.coords) v = -v;
        for (auto& v : neg.simple) v = -v;
        for (auto& v : neg.coroot) v = -v;
        neg.height = -r.height;
        roots_.push_back(neg);
    }
    for (std::size_t i = 0; i < roots_.size(); ++i) root_lookup_[roots_[i].coords] = static_cast<int>(i);
    for (auto& r : roots_) {
        LatticeVector twice = r.coords;
        for (auto& v : twice) v *= 2;
        if (root_lookup_.count(twice)) throw ValidationError("root system is not reduced");
    }
}

int RootDatum::root_index(const LatticeVector& coords) const {
    auto it = root_lookup_.find(coords);
    return it == root_lookup_.end() ? -1 : it->second;
}

std::int64_t RootDatum::fundamental_group_order() const {
    mpq_class dc = determinant(cartan_);
    mpq_class dr = determinant(IntMatrix::from_rows(simple_roots_, rank()));
    mpq_class q = abs(dc) / abs(dr);
    return q.get_num().get_si();
}

std::vector<int> RootDatum::torsion_primes() const {
    std::set<int> primes;
    for (auto& c : components_) {
        char t = c[0];
        int n = std::stoi(c.substr(1));
        if ((t == 'B' && n >= 3) || t == 'D' || t == 'G') primes.insert(2);
        if (t == 'F' || (t == 'E' && n <= 7)) primes.insert({2, 3});
        if (t == 'E' && n == 8) primes.insert({2, 3, 5});
    }
    for (int p : prime_factors(fundamental_group_order())) primes.insert(p);
    return {primes.begin(), primes.end()};
}

bool RootDatum::has_symplectic_sc_component() const {
    for (std::size_t k = 0; k < components_.size(); ++k) {
        const auto& c = components_[k];
        bool symplectic = c == "A1" || c == "B2" || c[0] == 'C';
        if (!symplectic) continue;
        // On the sc lattice the long simple root of C_k is divisible by 2.
        for (auto i : component_nodes_[k]) {
            if (gcd_of(simple_roots_[i]) > 1) return true;
        }
    }
    return false;
}

Parabolic Parabolic::from_indices(std::span<const int> idx) {
    Parabolic p;
    for (int i : idx) {
        if (i < 0 || i >= 32) throw ValidationError("parabolic index out of range");
        p.mask |= 1u << i;
    }
    return p;
}

std::vector<int> Parabolic::indices() const {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if (contains(static_cast<std::size_t>(i))) out.push_back(i);
    return out;
}

std::size_t WeylGroup::default_bound() {
    if (const char* env = std::getenv("FS_MAX_WEYL")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        throw ValidationError("FS_MAX_WEYL must be a positive integer");
    }
    return 2000;
}

WeylGroup::WeylGroup(RootDatumPtr rd, std::size_t bound) : rd_(std::move(rd)) {
    const std::size_t n = rd_->rank();
    elems_.push_back(WeylElement{{}, IntMatrix::identity(n)});
    lookup_.emplace(elems_[0].matrix, 0);
    std::size_t level_begin = 0, level_end = 1;
    while (level_begin < level_end) {
        for (std::size_t w = level_begin; w < level_end; ++w) {
            for (std::size_t i = 0; i < n; ++i) {
                IntMatrix m = elems_[w].matrix * rd_->simple_reflection(i);
                if (lookup_.count(m)) continue;
                if (elems_.size() >= bound)
                    throw ResourceError("Weyl group exceeds the enumeration bound of " + std::to_string(bound) +
                                        " elements (set FS_MAX_WEYL to raise it)");
                std::vector<int> word = elems_[w].word;
                word.push_back(static_cast<int>(i));
                lookup_.emplace(m, static_cast<int>(elems_.size()));
                elems_.push_back(WeylElement{std::move(word), std::move(m)});
            }
        }
        level_begin = level_end;
        level_end = elems_.size();
    }

    const std::size_t sz = elems_.size();
    right_.assign(sz, std::vector<int>(n));
    for (std::size_t w = 0; w < sz; ++w)
        for (std::size_t i = 0; i < n; ++i) right_[w][i] = find(elems_[w].matrix * rd_->simple_reflection(i));
    inverse_.assign(sz, 0);
    for (std::size_t w = 0; w < sz; ++w) {
        std::vector<int> rev(elems_[w].word.rbegin(), elems_[w].word.rend());
        inverse_[w] = from_word(rev);
    }
    root_image_.assign(sz, std::vector<int>(rd_->num_roots()));
    for (std::size_t w = 0; w < sz; ++w)
        for (std::size_t r = 0; r < rd_->num_roots(); ++r) {
            int idx = rd_->root_index(elems_[w].matrix.apply(rd_->root(r).coords));
            if (idx < 0) throw ArithmeticError("Weyl action does not preserve the root set");
            root_image_[w][r] = idx;
        }
    // s_β = w s_i w^{-1} for β = w(α_i).
    reflection_.assign(rd_->num_roots(), -1);
    for (std::size_t w = 0; w < sz; ++w)
        for (std::size_t i = 0; i < n; ++i) {
            int b = root_image_[w][i];
            if (reflection_[b] >= 0) continue;
            int s = mul(right_[w][i], inverse_[w]);
            reflection_[b] = s;
            reflection_[rd_->negate(static_cast<std::size_t>(b))] = s;
        }
}

int WeylGroup::find(const IntMatrix& m) const {
    auto it = lookup_.find(m);
    if (it == lookup_.end()) throw UsageError("matrix is not an element of the Weyl group");
    return it->second;
}

int WeylGroup::from_word(std::span<const int> word) const {
    int w = 0;
    for (int i : word) {
        if (i < 0 || static_cast<std::size_t>(i) >= rd_->rank())
            throw ValidationError("word letter out of range: " + std::to_string(i + 1));
        w = right_.empty() ? find(elems_[w].matrix * rd_->simple_reflection(static_cast<std::size_t>(i)))
                           : right_[w][i];
    }
    return w;
}

int WeylGroup::mul(int a, int b) const {
    int w = a;
    for (int i : elems_[b].word) w = right_[w][i];
    return w;
}

LatticeVector WeylGroup::act(int w, std::span<const std::int64_t> v) const { return elems_.at(w).matrix.apply(v); }

bool WeylGroup::right_descent(int w, std::size_t i) const {
    return !rd_->is_positive(static_cast<std::size_t>(root_image_[w][i]));
}

bool WeylGroup::bruhat_leq(int v, int w) const {
    while (true) {
        if (v == w || v == 0) return true;
        if (length(v) >= length(w)) return false;
        int s = elems_[w].word.back();
        int ws = right_[w][s];
        if (right_descent(v, static_cast<std::size_t>(s))) v = right_[v][s];
        w = ws;
    }
}

std::vector<std::vector<int>> WeylGroup::reduced_words(int w) const {
    {
        std::lock_guard lock(cache_mutex_);
        auto it = words_cache_.find(w);
        if (it != words_cache_.end()) return it->second;
    }
    std::vector<std::vector<int>> out;
    if (w == 0) {
        out.push_back({});
    } else {
        for (std::size_t i = 0; i < rd_->rank(); ++i) {
            if (!right_descent(w, i)) continue;
            for (auto word : reduced_words(right_[w][i])) {
                word.push_back(static_cast<int>(i));
                out.push_back(std::move(word));
            }
        }
        std::sort(out.begin(), out.end());
    }
    std::lock_guard lock(cache_mutex_);
    words_cache_[w] = out;
    return out;
}

const CosetTable& WeylGroup::cosets(Parabolic xi) const {
    if (!xi.subset_of(Parabolic::full(rd_->rank()))) throw UsageError("parabolic subset out of range");
    std::lock_guard lock(cache_mutex_);
    auto it = coset_cache_.find(xi.mask);
    if (it != coset_cache_.end()) return *it->second;
    auto t = std::make_unique<CosetTable>();
    t->xi = xi;
    const std::size_t sz = size();
    t->rep_of.assign(sz, -1);
    t->position.assign(sz, -1);
    for (std::size_t w = 0; w < sz; ++w) {
        bool minimal = true, inside = true;
        for (std::size_t i = 0; i < rd_->rank(); ++i) {
            if (xi.contains(i) && right_descent(static_cast<int>(w), i)) minimal = false;
        }
        for (int i : elems_[w].word)
            if (!xi.contains(static_cast<std::size_t>(i))) inside = false;
        if (minimal) {
            t->position[w] = static_cast<int>(t->min_reps.size());
            t->min_reps.push_back(static_cast<int>(w));
        }
        if (inside) t->subgroup.push_back(static_cast<int>(w));
    }
    for (std::size_t w = 0; w < sz; ++w) {
        int u = static_cast<int>(w);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < rd_->rank(); ++i)
                if (xi.contains(i) && right_descent(u, i)) {
                    u = right_[u][i];
                    changed = true;
                }
        }
        t->rep_of[w] = u;
    }
    auto& ref = *t;
    coset_cache_.emplace(xi.mask, std::move(t));
    return ref;
}

std::vector<int> WeylGroup::relative_reps(Parabolic xi, Parabolic xi_prime) const {
    if (!xi_prime.subset_of(xi)) throw UsageError("Ξ' must be a subset of Ξ");
    std::vector<int> out;
    for (int u : cosets(xi).subgroup) {
        bool ok = true;
        for (std::size_t i = 0; i < rd_->rank(); ++i)
            if (xi_prime.contains(i) && right_descent(u, i)) ok = false;
        if (ok) out.push_back(u);
    }
    return out;
}

std::vector<std::size_t> WeylGroup::positive_roots_in(Parabolic xi) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < rd_->num_positive(); ++r) {
        const auto& s = rd_->root(r).simple;
        bool ok = true;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] != 0 && !xi.contains(i)) ok = false;
        if (ok) out.push_back(r);
    }
    return out;
}

} // namespace fschubert
