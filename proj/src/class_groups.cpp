#include "ekc/class_groups.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ekc/numeric.hpp"
#include "ekc/primes.hpp"

namespace ekc {

// ---------------------------------------------------------------------------
// Binary quadratic forms

bool is_reduced(const BinaryForm& f) {
    if (f.a <= 0) return false;
    if (std::abs(f.b) > f.a || f.a > f.c) return false;
    if ((std::abs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

FormReduction reduce_form(const BinaryForm& f0) {
    if (f0.a <= 0 || f0.discriminant() >= 0) throw std::invalid_argument("reduce_form: form is not positive definite");
    FormReduction r;
    i128 a = f0.a, b = f0.b, c = f0.c;
    i128 m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    for (;;) {
        // x -> x + s y brings b into (-a, a].
        i128 s = floor_div(a - b, 2 * a);
        if (s != 0) {
            i128 nb = checked_add(b, checked_mul(2 * a, s));
            i128 nc = checked_add(checked_mul(checked_mul(a, s), s), checked_add(checked_mul(b, s), c));
            b = nb;
            c = nc;
            m01 = checked_add(m01, checked_mul(m00, s));
            m11 = checked_add(m11, checked_mul(m10, s));
        }
        if (a > c || (a == c && b < 0)) {
            // (x, y) -> (-y, x)
            std::swap(a, c);
            b = -b;
            i128 t0 = m00, t1 = m10;
            m00 = m01;
            m10 = m11;
            m01 = -t0;
            m11 = -t1;
            continue;
        }
        break;
    }
    r.form = {to_i64(a), to_i64(b), to_i64(c)};
    r.m[0][0] = to_i64(m00);
    r.m[0][1] = to_i64(m01);
    r.m[1][0] = to_i64(m10);
    r.m[1][1] = to_i64(m11);
    return r;
}

BinaryForm compose_forms(const BinaryForm& f1, const BinaryForm& f2) {
    const i64 D = f1.discriminant();
    if (D != f2.discriminant()) throw std::invalid_argument("compose_forms: discriminants differ");
    BinaryForm p = f1, q = f2;
    if (p.a > q.a) std::swap(p, q);
    const i128 a1 = p.a, b1 = p.b;
    const i128 a2 = q.a, b2 = q.b, c2 = q.c;
    const i128 s = (b1 + b2) / 2;
    const i128 n = b2 - s;
    i128 y1, d;
    if (a2 % a1 == 0) {
        y1 = 0;
        d = a1;
    } else {
        i128 u, v;
        d = ext_gcd(a2, a1, u, v);
        y1 = u;
    }
    i128 x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        d1 = ext_gcd(s, d, x2, y2);
        y2 = -y2;
    }
    const i128 v1 = a1 / d1;
    const i128 v2 = a2 / d1;
    const i128 r = mod_floor(checked_sub(checked_mul(checked_mul(y1, y2), n), checked_mul(x2, c2)), v1);
    const i128 b3 = checked_add(b2, checked_mul(checked_mul(2, v2), r));
    const i128 a3 = checked_mul(v1, v2);
    const i128 num = checked_sub(checked_mul(b3, b3), D);
    if (num % (4 * a3) != 0) throw std::logic_error("compose_forms: composition failed");
    const i128 c3 = num / (4 * a3);
    return reduce_form({to_i64(a3), to_i64(b3), to_i64(c3)}).form;
}

BinaryForm form_of_ideal(const ImagQuadField& K, const IdealHNF& I) {
    const i64 ap = I.a / I.c;
    const i64 bp = I.b / I.c;
    const i128 f = checked_add(checked_mul(bp, checked_add(bp, K.omega_trace)), K.omega_norm);
    return {ap, 2 * bp + K.omega_trace, to_i64(f / ap)};
}

IdealHNF ideal_of_form(const ImagQuadField& K, const BinaryForm& f) {
    if (f.discriminant() != K.d_K) throw std::invalid_argument("ideal_of_form: discriminant mismatch");
    const i64 bp = static_cast<i64>(mod_floor((f.b - K.omega_trace) / 2, f.a));
    return make_ideal(K, f.a, bp, 1);
}

int FormClassGroup::index_of(const BinaryForm& reduced) const {
    auto it = std::lower_bound(forms.begin(), forms.end(), reduced);
    if (it == forms.end() || !(*it == reduced)) throw std::invalid_argument("index_of: not a reduced form of this group");
    return static_cast<int>(it - forms.begin());
}

int FormClassGroup::class_of(const ImagQuadField& K, const IdealHNF& I) const {
    return index_of(reduce_form(form_of_ideal(K, I)).form);
}

int FormClassGroup::power(int i, i64 e) const {
    i64 ord = order(i);
    e = static_cast<i64>(mod_floor(e, ord));
    int r = 0;
    for (i64 k = 0; k < e; ++k) r = table[r][i];
    return r;
}

int FormClassGroup::order(int i) const {
    int r = i;
    int k = 1;
    while (r != 0) {
        r = table[r][i];
        ++k;
    }
    return k;
}

FormClassGroup class_group(ImagQuadField& K) {
    if (-K.d_K > 10000) throw std::invalid_argument("class_group: |d_K| above the supported range 1e4");
    FormClassGroup G;
    const i64 D = K.d_K;
    G.discriminant = D;
    const i64 amax = isqrt(-D / 3);
    for (i64 a = 1; a <= amax; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            if (mod_floor(b - D, 2) != 0) continue;
            const i64 num = b * b - D;
            if (num % (4 * a) != 0) continue;
            const i64 c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && a == c) continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
            G.forms.push_back({a, b, c});
        }
    }
    std::sort(G.forms.begin(), G.forms.end());
    const int h = static_cast<int>(G.forms.size());
    std::vector<IdealHNF> ideals;
    for (const auto& f : G.forms) ideals.push_back(ideal_of_form(K, f));
    G.table.assign(h, std::vector<int>(h, 0));
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) G.table[i][j] = G.class_of(K, multiply(K, ideals[i], ideals[j]));

    G.inverse.assign(h, -1);
    for (int i = 0; i < h; ++i) {
        if (G.table[0][i] != i) throw std::logic_error("class_group: principal form is not the identity");
        for (int j = 0; j < h; ++j) {
            if (G.table[i][j] != G.table[j][i]) throw std::logic_error("class_group: composition not commutative");
            if (G.table[i][j] == 0) G.inverse[i] = j;
            for (int k = 0; k < h; ++k) {
                if (G.table[G.table[i][j]][k] != G.table[i][G.table[j][k]])
                    throw std::logic_error("class_group: composition not associative");
            }
        }
        if (G.inverse[i] < 0) throw std::logic_error("class_group: missing inverse");
    }
    K.h_K = h;
    K.rho_K = residue_from_class_number(K, h);
    return G;
}

std::optional<FieldElement> is_principal(const ImagQuadField& K, const IdealHNF& I) {
    const i64 ap = I.a / I.c;
    const i64 bp = I.b / I.c;
    const FormReduction red = reduce_form(form_of_ideal(K, I));
    if (red.form.a != 1) return std::nullopt;
    const i128 u = red.m[0][0];
    const i128 v = red.m[1][0];
    FieldElement mu{checked_add(checked_mul(u, ap), checked_mul(v, bp)), v};
    if (norm(K, mu) != ap) throw std::logic_error("is_principal: generator norm mismatch");
    return FieldElement{checked_mul(mu.x, I.c), checked_mul(mu.y, I.c)};
}

bool nonabelian_certificate(const FormClassGroup& G) {
    const i64 h = G.class_number();
    return (h & (h - 1)) != 0;
}

// ---------------------------------------------------------------------------
// (O_K/q)^x

ResidueGroup::ResidueGroup(const ImagQuadField& K, const PrimeIdeal& q)
    : t_(K.omega_trace), n_(K.omega_norm), p_(q.p), nq_(q.norm()), root_(0), f_(q.f) {
    if (nq_ > 100000) throw std::invalid_argument("ResidueGroup: Nq above 1e5");
    if (f_ == 1) {
        if (q.ideal.c != 1 || q.ideal.a != p_) throw std::invalid_argument("ResidueGroup: unexpected HNF for a degree-1 prime");
        root_ = q.ideal.b;
    } else if (!(q.ideal == IdealHNF{p_, 0, p_})) {
        throw std::invalid_argument("ResidueGroup: unexpected HNF for an inert prime");
    }
    const i64 ord = nq_ - 1;
    std::vector<i64> ell;
    for (auto& [l, e] : factorize(std::max<i64>(ord, 1))) ell.push_back(l);
    auto pw = [&](i64 g, i64 e) {
        i64 r = 1;
        while (e > 0) {
            if (e & 1) r = multiply_codes(r, g);
            g = multiply_codes(g, g);
            e >>= 1;
        }
        return r;
    };
    gen_ = 1;
    if (ord > 1) {
        for (i64 g = 2; g < nq_; ++g) {
            bool ok = true;
            for (i64 l : ell) ok = ok && pw(g, ord / l) != 1;
            if (ok) {
                gen_ = g;
                break;
            }
        }
    }
    log_.assign(static_cast<std::size_t>(nq_), -1);
    i64 x = 1;
    for (i64 k = 0; k < ord; ++k) {
        if (log_[x] != -1) throw std::logic_error("ResidueGroup: generator has small order");
        log_[x] = static_cast<std::int32_t>(k);
        x = multiply_codes(x, gen_);
    }
    if (x != 1) throw std::logic_error("ResidueGroup: generator order mismatch");
}

i64 ResidueGroup::multiply_codes(i64 u, i64 v) const {
    if (f_ == 1) return static_cast<i64>(static_cast<i128>(u) * v % p_);
    const i128 x1 = u % p_, y1 = u / p_, x2 = v % p_, y2 = v / p_;
    const i128 yy = y1 * y2 % p_;
    const i128 x = mod_floor(x1 * x2 - n_ * yy, p_);
    const i128 y = mod_floor(x1 * y2 + x2 * y1 + t_ * yy, p_);
    return static_cast<i64>(x + p_ * y);
}

i64 ResidueGroup::reduce(const FieldElement& e) const {
    if (f_ == 1) {
        // omega = -root mod q
        const i128 x = mod_floor(e.x, p_);
        const i128 y = mod_floor(e.y, p_);
        return static_cast<i64>(mod_floor(x - y * root_, p_));
    }
    return static_cast<i64>(mod_floor(e.x, p_) + p_ * mod_floor(e.y, p_));
}

i64 ResidueGroup::log_code(i64 code) const {
    const std::int32_t l = log_.at(static_cast<std::size_t>(code));
    if (l < 0) throw std::domain_error("ResidueGroup::log: element lies in q");
    return l;
}

i64 ResidueGroup::log(const FieldElement& e) const { return log_code(reduce(e)); }

FieldElement ResidueGroup::lift(i64 code) const {
    if (f_ == 1) return {code, 0};
    return {code % p_, code / p_};
}

// ---------------------------------------------------------------------------
// Roots of unity

RootOfUnity make_root(i64 k, i64 n) {
    if (n <= 0) throw std::invalid_argument("make_root: order must be positive");
    k = static_cast<i64>(mod_floor(k, n));
    if (k == 0) return {0, 1};
    const i64 g = std::gcd(k, n);
    return {k / g, n / g};
}

RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
    const i64 l = std::lcm(a.n, b.n);
    return make_root(a.k * (l / a.n) + b.k * (l / b.n), l);
}

RootOfUnity conj(const RootOfUnity& a) { return make_root(-a.k, a.n); }

std::complex<double> to_complex(const RootOfUnity& r) {
    if (r.k == 0) return {1.0, 0.0};
    if (2 * r.k > r.n) return std::conj(to_complex({r.n - r.k, r.n}));
    if (2 * r.k == r.n) return {-1.0, 0.0};
    if (4 * r.k == r.n) return {0.0, 1.0};
    const double angle = 2.0 * kPi * static_cast<double>(r.k) / static_cast<double>(r.n);
    return {std::cos(angle), std::sin(angle)};
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

using Matrix = std::vector<std::vector<i128>>;

struct SmithForm {
    std::vector<i128> diag;
    Matrix V;
};

// D = U A V with U, V unimodular; returns the diagonal and V.
SmithForm smith_normal_form(Matrix A, std::size_t cols) {
    const std::size_t m = A.size();
    const std::size_t n = cols;
    Matrix V(n, std::vector<i128>(n, 0));
    for (std::size_t i = 0; i < n; ++i) V[i][i] = 1;
    auto swap_cols = [&](std::size_t x, std::size_t y) {
        for (auto& row : A) std::swap(row[x], row[y]);
        for (auto& row : V) std::swap(row[x], row[y]);
    };
    auto col_axpy = [&](std::size_t dst, std::size_t src, i128 q) {
        for (auto& row : A) row[dst] = checked_sub(row[dst], checked_mul(q, row[src]));
        for (auto& row : V) row[dst] = checked_sub(row[dst], checked_mul(q, row[src]));
    };
    std::vector<i128> diag;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        bool found_any = false;
        for (;;) {
            std::size_t pi = m, pj = n;
            i128 best = 0;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    i128 v = A[i][j] < 0 ? -A[i][j] : A[i][j];
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == m) break;
            found_any = true;
            std::swap(A[t], A[pi]);
            if (pj != t) swap_cols(t, pj);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                i128 q = floor_div(A[i][t], A[t][t]);
                if (q != 0)
                    for (std::size_t j = t; j < n; ++j) A[i][j] = checked_sub(A[i][j], checked_mul(q, A[t][j]));
                if (A[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                i128 q = floor_div(A[t][j], A[t][t]);
                if (q != 0) col_axpy(j, t, q);
                if (A[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            bool divisible = true;
            for (std::size_t i = t + 1; i < m && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        for (std::size_t k = t; k < n; ++k) A[t][k] = checked_add(A[t][k], A[i][k]);
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (!found_any) break;
        if (A[t][t] < 0) {
            for (auto& row : A) row[t] = -row[t];
            for (auto& row : V) row[t] = -row[t];
        }
        diag.push_back(A[t][t]);
    }
    if (diag.size() < n) throw std::logic_error("smith_normal_form: relation lattice does not have full rank");
    return {diag, V};
}

}  // namespace

// ---------------------------------------------------------------------------
// Ray class groups

i64 RayClassGroup::order() const {
    i64 r = 1;
    for (i64 n : invariants_) r *= n;
    return r;
}

RayClassGroup::Pair RayClassGroup::pair_of(const IdealHNF& J) const {
    const int cls = classes_->class_of(field_, J);
    if (!residue_) return {cls, 0};
    const IdealHNF T = ekc::multiply(field_, J, rep_conj_[cls]);
    auto beta = is_principal(field_, T);
    if (!beta) throw std::logic_error("RayClassGroup: product with inverse representative is not principal");
    const i64 ord = residue_->order();
    return {cls, static_cast<i64>(mod_floor(residue_->log(*beta) - rep_norm_log_[cls], ord))};
}

RayClassGroup::Pair RayClassGroup::pair_multiply(const Pair& x, const Pair& y) const {
    const int cls = classes_->multiply(x.cls, y.cls);
    if (!residue_) return {cls, 0};
    auto key = std::make_pair(std::min(x.cls, y.cls), std::max(x.cls, y.cls));
    auto it = cocycle_.find(key);
    if (it == cocycle_.end()) {
        Pair p = pair_of(ekc::multiply(field_, reps_[key.first], reps_[key.second]));
        it = cocycle_.emplace(key, p.ell).first;
    }
    return {cls, static_cast<i64>(mod_floor(x.ell + y.ell + it->second, residue_->order()))};
}

std::vector<i64> RayClassGroup::reduce_vector(const std::vector<i64>& v) const {
    std::vector<i64> w(invariants_.size(), 0);
    for (std::size_t j = 0; j < invariants_.size(); ++j) {
        i128 s = 0;
        for (std::size_t i = 0; i < v.size(); ++i) s = checked_add(s, checked_mul(v[i], transform_[i][j]));
        w[j] = static_cast<i64>(mod_floor(s, invariants_[j]));
    }
    return w;
}

std::vector<i64> RayClassGroup::log(const IdealHNF& I) const {
    if (modulus_ && divides(modulus_->ideal, I)) throw std::invalid_argument("RayClassGroup::log: ideal not coprime to the modulus");
    const Pair pr = pair_of(I);
    std::vector<i64> v = class_exponents_[pr.cls];
    if (residue_) v.push_back(pr.ell - class_ell_[pr.cls]);
    return reduce_vector(v);
}

std::vector<i64> RayClassGroup::log_class_part(const IdealHNF& I) const {
    std::vector<i64> v = class_exponents_[classes_->class_of(field_, I)];
    if (residue_) v.push_back(0);
    return reduce_vector(v);
}

std::vector<i64> RayClassGroup::kernel_generator() const {
    std::vector<i64> v(gens_.size(), 0);
    if (residue_) v.push_back(1);
    return reduce_vector(v);
}

std::vector<i64> RayClassGroup::add(const std::vector<i64>& u, const std::vector<i64>& v) const {
    std::vector<i64> w(invariants_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (u[i] + v[i]) % invariants_[i];
    return w;
}

std::vector<i64> RayClassGroup::scale(const std::vector<i64>& u, i64 k) const {
    std::vector<i64> w(invariants_.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = static_cast<i64>(mod_floor(static_cast<i128>(u[i]) * k, invariants_[i]));
    return w;
}

bool RayClassGroup::is_identity(const std::vector<i64>& u) const {
    return std::all_of(u.begin(), u.end(), [](i64 x) { return x == 0; });
}

i64 RayClassGroup::index(const std::vector<i64>& u) const {
    i64 idx = 0;
    for (std::size_t i = invariants_.size(); i-- > 0;) idx = idx * invariants_[i] + u[i];
    return idx;
}

std::vector<i64> RayClassGroup::element(i64 idx) const {
    std::vector<i64> u(invariants_.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = idx % invariants_[i];
        idx /= invariants_[i];
    }
    return u;
}

RayClassGroup build_ray_class_group(const ImagQuadField& K, const FormClassGroup& G,
                                    const std::optional<PrimeIdeal>& modulus, bool shortcut) {
    if (!K.finalized()) throw std::invalid_argument("ray_class_group: field has no class number yet");
    RayClassGroup H;
    H.field_ = K;
    H.classes_ = std::make_shared<const FormClassGroup>(G);
    H.modulus_ = modulus;
    const int h = static_cast<int>(G.class_number());
    i64 res_order = 1;
    if (modulus) {
        H.residue_ = std::make_shared<const ResidueGroup>(K, *modulus);
        res_order = H.residue_->order();
        std::vector<i64> codes;
        for (const auto& u : units(K)) codes.push_back(H.residue_->reduce(u));
        std::sort(codes.begin(), codes.end());
        H.unit_image_order_ = std::unique(codes.begin(), codes.end()) - codes.begin();
    }

    if (shortcut && modulus && h == 1) {
        // H_q = (O_K/q)^x / image(mu_K), cyclic; log(I) = log(generator) mod n.
        const i64 n = res_order / H.unit_image_order_;
        H.class_exponents_ = {{}};
        H.class_ell_ = {0};
        H.reps_ = {IdealHNF{1, 0, 1}};
        H.rep_conj_ = H.reps_;
        H.rep_norm_log_ = {0};
        if (n > 1) {
            H.invariants_ = {n};
            H.transform_ = {{1}};
        } else {
            H.transform_ = {{}};
        }
        return H;
    }

    // Representatives R_C of each class with norm prime to the residue characteristic.
    if (modulus) {
        H.reps_.assign(h, IdealHNF{0, 0, 0});
        int found = 0;
        for (double bound = 64; found < h; bound *= 4) {
            if (bound > 1e6) throw std::runtime_error("ray_class_group: representative search exceeded its budget");
            found = 0;
            std::fill(H.reps_.begin(), H.reps_.end(), IdealHNF{0, 0, 0});
            for (const auto& e : enumerate_ideals(K, bound).entries) {
                if (e.ideal.norm() % modulus->p == 0) continue;
                const int cls = G.class_of(K, e.ideal);
                if (H.reps_[cls].a == 0) {
                    H.reps_[cls] = e.ideal;
                    ++found;
                }
            }
        }
        for (const auto& R : H.reps_) {
            H.rep_conj_.push_back(conjugate(K, R));
            H.rep_norm_log_.push_back(H.residue_->log(FieldElement{R.norm(), 0}));
        }
    }

    // Greedy chain of class-group generators: each new prime p has minimal m
    // with [p]^m in the span of the earlier ones.
    std::vector<std::optional<std::vector<i64>>> exps(h);
    exps[0] = std::vector<i64>{};
    std::vector<int> members{0};
    struct ChainRelation {
        std::vector<i64> b;
        i64 m;
        int target;
    };
    std::vector<ChainRelation> chain;
    std::vector<PrimeIdeal> primes;
    std::size_t next = 0;
    double bound = 128;
    while (static_cast<int>(members.size()) < h) {
        if (next >= primes.size()) {
            if (bound > 1e6) throw std::runtime_error("ray_class_group: generator search exceeded its budget");
            primes = prime_ideals_up_to(K, bound);
            bound *= 4;
            continue;
        }
        const PrimeIdeal P = primes[next++];
        if (modulus && P.p == modulus->p) continue;
        const int C = G.class_of(K, P.ideal);
        if (exps[C]) continue;
        bool seen = false;
        for (const auto& g : H.gens_) seen = seen || g.ideal == P.ideal;
        if (seen) continue;
        int cur = C;
        i64 m = 1;
        while (!exps[cur]) {
            cur = G.multiply(cur, C);
            ++m;
        }
        chain.push_back({*exps[cur], m, cur});
        const std::vector<int> old = members;
        for (int s : old) exps[s]->push_back(0);
        int pk = 0;
        for (i64 k = 1; k < m; ++k) {
            pk = G.multiply(pk, C);
            for (int s : old) {
                const int cls = G.multiply(pk, s);
                std::vector<i64> e = *exps[s];
                e.back() = k;
                exps[cls] = e;
                members.push_back(cls);
            }
        }
        H.gens_.push_back(P);
        H.gen_orders_.push_back(m);
    }
    const std::size_t r = H.gens_.size();
    for (int c = 0; c < h; ++c) {
        std::vector<i64> e = *exps[c];
        e.resize(r, 0);
        H.class_exponents_.push_back(e);
    }

    // Residue logs of the products of generator powers representing each class.
    std::vector<i64> deltas(r, 0);
    if (modulus) {
        std::vector<RayClassGroup::Pair> gen_pair;
        for (const auto& P : H.gens_) gen_pair.push_back(H.pair_of(P.ideal));
        H.class_ell_.assign(h, 0);
        for (int c = 0; c < h; ++c) {
            RayClassGroup::Pair acc{0, 0};
            for (std::size_t j = 0; j < r; ++j)
                for (i64 k = 0; k < H.class_exponents_[c][j]; ++k) acc = H.pair_multiply(acc, gen_pair[j]);
            if (acc.cls != c) throw std::logic_error("ray_class_group: class exponent bookkeeping failed");
            H.class_ell_[c] = acc.ell;
        }
        for (std::size_t j = 0; j < r; ++j) {
            RayClassGroup::Pair acc{0, 0};
            for (i64 k = 0; k < chain[j].m; ++k) acc = H.pair_multiply(acc, gen_pair[j]);
            if (acc.cls != chain[j].target) throw std::logic_error("ray_class_group: chain relation class mismatch");
            deltas[j] = acc.ell - H.class_ell_[chain[j].target];
        }
    } else {
        H.class_ell_.assign(h, 0);
    }

    const std::size_t cols = r + (modulus ? 1 : 0);
    Matrix rel;
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<i128> row(cols, 0);
        for (std::size_t i = 0; i < chain[j].b.size(); ++i) row[i] = -chain[j].b[i];
        row[j] = chain[j].m;
        if (modulus) row[r] = -deltas[j];
        rel.push_back(row);
    }
    if (modulus) {
        std::vector<i128> row(cols, 0);
        row[r] = res_order;
        rel.push_back(row);
        for (const auto& u : units(K)) {
            std::vector<i128> ur(cols, 0);
            ur[r] = H.residue_->log(u);
            rel.push_back(ur);
        }
    }
    if (cols == 0) {
        H.transform_ = {};
        return H;
    }
    SmithForm snf = smith_normal_form(rel, cols);
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < cols; ++j)
        if (snf.diag[j] > 1) keep.push_back(j);
    H.transform_.assign(cols, std::vector<i64>(keep.size(), 0));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        H.invariants_.push_back(to_i64(snf.diag[keep[k]]));
        for (std::size_t i = 0; i < cols; ++i)
            H.transform_[i][k] = to_i64(mod_floor(snf.V[i][keep[k]], snf.diag[keep[k]]));
    }
    return H;
}

RayClassGroup ray_class_group(const ImagQuadField& K, const FormClassGroup& G) {
    return build_ray_class_group(K, G, std::nullopt, false);
}

RayClassGroup ray_class_group(const ImagQuadField& K, const FormClassGroup& G, const PrimeIdeal& q) {
    return build_ray_class_group(K, G, q, true);
}

RayClassGroup ray_class_group_generic(const ImagQuadField& K, const FormClassGroup& G, const PrimeIdeal& q) {
    return build_ray_class_group(K, G, q, false);
}

// ---------------------------------------------------------------------------
// Characters

RayClassCharacter::RayClassCharacter(std::vector<i64> exponents, std::vector<i64> invariants, bool primitive)
    : exponents_(std::move(exponents)), invariants_(std::move(invariants)), primitive_(primitive) {
    if (exponents_.size() != invariants_.size()) throw std::invalid_argument("RayClassCharacter: size mismatch");
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        exponents_[i] = static_cast<i64>(mod_floor(exponents_[i], invariants_[i]));
        exponent_lcm_ = std::lcm(exponent_lcm_, invariants_[i]);
    }
}

RootOfUnity RayClassCharacter::operator()(const std::vector<i64>& element) const {
    i128 k = 0;
    for (std::size_t i = 0; i < exponents_.size(); ++i)
        k = mod_floor(k + static_cast<i128>(exponents_[i]) * element[i] % invariants_[i] * (exponent_lcm_ / invariants_[i]),
                      exponent_lcm_);
    return make_root(static_cast<i64>(k), exponent_lcm_);
}

RayClassCharacter RayClassCharacter::conjugate() const {
    std::vector<i64> e(exponents_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = -exponents_[i];
    return RayClassCharacter(e, invariants_, primitive_);
}

bool RayClassCharacter::is_principal() const {
    return std::all_of(exponents_.begin(), exponents_.end(), [](i64 x) { return x == 0; });
}

bool RayClassCharacter::is_real() const {
    for (std::size_t i = 0; i < exponents_.size(); ++i)
        if ((2 * exponents_[i]) % invariants_[i] != 0) return false;
    return true;
}

std::vector<RayClassCharacter> characters(const RayClassGroup& H) {
    std::vector<RayClassCharacter> out;
    const i64 n = H.order();
    const auto kernel = H.kernel_generator();
    for (i64 idx = 0; idx < n; ++idx) {
        RayClassCharacter chi(H.element(idx), H.invariants(), true);
        bool primitive = true;
        if (H.modulus()) primitive = !(chi(kernel) == RootOfUnity{0, 1});
        out.emplace_back(H.element(idx), H.invariants(), primitive);
    }
    return out;
}

}  // namespace ekc
