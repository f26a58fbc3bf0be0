//! PBW straightening in a single Verma module of sl_{r+1}.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::Rational;

/// An element of the Chevalley basis: `E(a, b)` is e_{a,b} (a ≠ b, 1-based),
/// `H(c)` is h_c = e_{c,c} − e_{c+1,c+1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    E(usize, usize),
    H(usize),
}

impl Element {
    pub fn is_lowering(&self) -> bool {
        matches!(*self, Element::E(a, b) if a > b)
    }

    pub fn is_raising(&self) -> bool {
        matches!(*self, Element::E(a, b) if a < b)
    }
}

/// Lowering generators e_{a,b} (a > b) ordered by b, then a.
pub fn lowering_generators(rank: usize) -> Vec<(usize, usize)> {
    let mut g = Vec::new();
    for b in 1..=rank {
        for a in b + 1..=rank + 1 {
            g.push((a, b));
        }
    }
    g
}

/// Colors (0-based simple roots) carried by e_{a,b}, a > b: b ≤ i < a.
pub fn colors_of(a: usize, b: usize) -> std::ops::Range<usize> {
    (b - 1)..(a - 1)
}

/// Sparse combination of Chevalley elements with integer coefficients.
pub fn commutator(x: Element, y: Element) -> Vec<(Element, i64)> {
    use Element::{E, H};
    match (x, y) {
        (E(a, b), E(c, d)) => {
            let mut out: Vec<(Element, i64)> = Vec::new();
            let mut diag: BTreeMap<usize, i64> = BTreeMap::new();
            // δ_bc e_ad − δ_da e_cb
            let mut push = |p: usize, q: usize, s: i64, diag: &mut BTreeMap<usize, i64>| {
                if p != q {
                    out.push((E(p, q), s));
                } else {
                    *diag.entry(p).or_default() += s;
                }
            };
            if b == c {
                push(a, d, 1, &mut diag);
            }
            if d == a {
                push(c, b, -1, &mut diag);
            }
            // Σ_p κ_p e_{pp} with Σ κ_p = 0 rewritten in the h basis:
            // e_pp − e_qq = h_p + … + h_{q−1}.
            let mut run = 0i64;
            let max = diag.keys().next_back().copied().unwrap_or(0);
            for p in 1..max {
                run += diag.get(&p).copied().unwrap_or(0);
                if run != 0 {
                    out.push((H(p), run));
                }
            }
            out
        }
        _ => panic!("commutator only needed between e-generators"),
    }
}

/// Eigenvalue weight of e_{a,b} under h_c: (ε_a − ε_b)(h_c).
fn root_on_h(a: usize, b: usize, c: usize) -> i64 {
    let eps = |p: usize| -> i64 {
        (if p == c { 1 } else { 0 }) - (if p == c + 1 { 1 } else { 0 })
    };
    eps(a) - eps(b)
}

pub type Mono = Vec<u32>;
pub type LinComb = BTreeMap<Mono, Rational>;

/// Action of Chevalley elements on the PBW basis of one Verma module M_Λ,
/// with Λ given by m[c] = Λ(h_c). Results are memoized per instance.
#[derive(Debug)]
pub struct FactorAction {
    rank: usize,
    m: Vec<Rational>,
    gens: Vec<(usize, usize)>,
    memo: HashMap<(Element, Mono), LinComb>,
}

fn add_into(acc: &mut LinComb, mono: Mono, c: Rational) {
    if c == Rational::ZERO {
        return;
    }
    match acc.get_mut(&mono) {
        Some(v) => {
            *v += c;
            if *v == Rational::ZERO {
                acc.remove(&mono);
            }
        }
        None => {
            acc.insert(mono, c);
        }
    }
}

impl FactorAction {
    pub fn new(rank: usize, m: Vec<Rational>) -> Self {
        FactorAction {
            rank,
            m,
            gens: lowering_generators(rank),
            memo: HashMap::new(),
        }
    }

    pub fn generators(&self) -> &[(usize, usize)] {
        &self.gens
    }

    fn gen_index(&self, a: usize, b: usize) -> usize {
        self.gens
            .iter()
            .position(|&g| g == (a, b))
            .expect("lowering generator")
    }

    /// h_c eigenvalue on F_I v.
    pub fn weight(&self, c: usize, mono: &[u32]) -> Rational {
        let mut w = self.m[c - 1].clone();
        for (g, &k) in mono.iter().enumerate() {
            if k > 0 {
                let (a, b) = self.gens[g];
                w += Rational::from(root_on_h(a, b, c) * k as i64);
            }
        }
        w
    }

    /// X · (F_I v) expanded in the PBW basis.
    pub fn apply(&mut self, x: Element, mono: &[u32]) -> LinComb {
        if let Element::H(c) = x {
            let mut out = LinComb::new();
            add_into(&mut out, mono.to_vec(), self.weight(c, mono));
            return out;
        }
        let key = (x, mono.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let out = self.apply_uncached(x, mono);
        self.memo.insert(key, out.clone());
        out
    }

    fn apply_uncached(&mut self, x: Element, mono: &[u32]) -> LinComb {
        let Element::E(a, b) = x else { unreachable!() };
        let first = mono.iter().position(|&k| k > 0);
        let Some(g1) = first else {
            // Highest-weight vector.
            let mut out = LinComb::new();
            if a > b {
                let mut m = vec![0; self.gens.len()];
                m[self.gen_index(a, b)] = 1;
                out.insert(m, Rational::ONE);
            }
            return out;
        };
        if a > b {
            let gx = self.gen_index(a, b);
            if gx <= g1 {
                let mut m = mono.to_vec();
                m[gx] += 1;
                let mut out = LinComb::new();
                out.insert(m, Rational::ONE);
                return out;
            }
        }
        // X y₁ R v = y₁ (X R v) + [X, y₁] R v
        let (c, d) = self.gens[g1];
        let y1 = Element::E(c, d);
        let mut rest = mono.to_vec();
        rest[g1] -= 1;
        let mut out = LinComb::new();
        for (m2, coef) in self.apply(x, &rest) {
            for (m3, c3) in self.apply(y1, &m2) {
                add_into(&mut out, m3, &coef * &c3);
            }
        }
        for (z, s) in commutator(x, y1) {
            for (m3, c3) in self.apply(z, &rest) {
                add_into(&mut out, m3, c3 * Rational::from(s));
            }
        }
        out
    }

    /// Straightens a word of lowering generators (leftmost acts last) applied to v.
    pub fn straighten(&mut self, word: &[(usize, usize)]) -> LinComb {
        let mut cur = LinComb::new();
        cur.insert(vec![0; self.gens.len()], Rational::ONE);
        for &(a, b) in word.iter().rev() {
            let mut next = LinComb::new();
            for (m, c) in cur {
                for (m2, c2) in self.apply(Element::E(a, b), &m) {
                    add_into(&mut next, m2, &c * &c2);
                }
            }
            cur = next;
        }
        cur
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}
