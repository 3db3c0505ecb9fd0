use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use dashmap::DashMap;

use super::mono::Mono;
use super::PbwError;
use crate::field::Scalar;

/// Linear combination of PBW monomials.
pub type Terms = BTreeMap<Mono, Scalar>;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

type AtomKey = (Mono, usize, bool);

/// Universal enveloping algebra of a finite-dimensional Lie algebra with a
/// fixed generator order, plus formal inverses of selected generators.
pub struct Uea {
    id: u64,
    family: u64,
    names: Vec<String>,
    index: HashMap<String, usize>,
    table: Vec<Vec<Terms>>,
    invertible: Vec<bool>,
    atom_cache: DashMap<AtomKey, Arc<Terms>>,
    mono_cache: DashMap<(Mono, Mono), Arc<Terms>>,
}

impl std::fmt::Debug for Uea {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Uea").field("generators", &self.names).field("invertible", &self.invertible).finish()
    }
}

pub(crate) fn add_term(acc: &mut Terms, m: Mono, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&m) {
        Some(x) => {
            let s = &*x + &c;
            if s.is_zero() {
                acc.remove(&m);
            } else {
                *x = s;
            }
        }
        None => {
            acc.insert(m, c);
        }
    }
}

pub(crate) fn add_scaled(acc: &mut Terms, t: &Terms, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (m, d) in t {
        let v = if c.is_one() { d.clone() } else { d * c };
        add_term(acc, m.clone(), v);
    }
}

fn single(m: Mono) -> Arc<Terms> {
    let mut t = Terms::new();
    t.insert(m, Scalar::one());
    Arc::new(t)
}

impl Uea {
    /// Builds the algebra from generator names and the brackets `[g_i, g_j]`
    /// for `i < j` (or either order; antisymmetry is applied). Missing pairs
    /// commute.
    pub fn new(names: Vec<String>, brackets: Vec<(usize, usize, Terms)>) -> Result<Arc<Uea>, PbwError> {
        let n = names.len();
        if n == 0 {
            return Err(PbwError::NoGenerators);
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(PbwError::DuplicateGenerator(name.clone()));
            }
        }
        let mut table = vec![vec![Terms::new(); n]; n];
        let mut seen = vec![vec![false; n]; n];
        for (i, j, t) in brackets {
            for m in t.keys() {
                if m.len() != n || m.degree() > 1 || m.exponents().iter().any(|e| *e < 0) {
                    return Err(PbwError::BracketDegree(names[i].clone(), names[j].clone()));
                }
            }
            if i == j {
                if !t.is_empty() {
                    return Err(PbwError::InconsistentBracket(names[i].clone(), names[j].clone()));
                }
                continue;
            }
            let neg: Terms = t.iter().map(|(m, c)| (m.clone(), -c)).collect();
            if seen[i][j] {
                if table[i][j] != t {
                    return Err(PbwError::InconsistentBracket(names[i].clone(), names[j].clone()));
                }
                continue;
            }
            seen[i][j] = true;
            seen[j][i] = true;
            table[i][j] = t;
            table[j][i] = neg;
        }
        let id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        Ok(Arc::new(Uea {
            id,
            family: id,
            names,
            index,
            table,
            invertible: vec![false; n],
            atom_cache: DashMap::new(),
            mono_cache: DashMap::new(),
        }))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn family(&self) -> u64 {
        self.family
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        self.invertible[i]
    }

    pub fn any_invertible(&self) -> bool {
        self.invertible.iter().any(|b| *b)
    }

    /// `[g_i, g_j]` as stored in the table.
    pub fn bracket(&self, i: usize, j: usize) -> &Terms {
        &self.table[i][j]
    }

    /// Same algebra with a formal inverse of generator `g`, commuting by
    /// `[X, g⁻¹] = -g⁻¹[X, g]g⁻¹`. Fails when `ad g` is not nilpotent on the
    /// generators, since the rule would then recurse forever.
    pub fn adjoin_inverse(self: &Arc<Self>, g: usize) -> Result<Arc<Uea>, PbwError> {
        let n = self.n();
        if g >= n {
            return Err(PbwError::UnknownGenerator(format!("#{g}")));
        }
        for x in 0..n {
            let mut v: BTreeMap<usize, Scalar> = BTreeMap::new();
            v.insert(x, Scalar::one());
            let mut steps = 0;
            while !v.is_empty() {
                if steps > n + 1 {
                    return Err(PbwError::NonTerminatingInverse(self.names[g].clone()));
                }
                let mut next: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (y, c) in &v {
                    for (m, d) in &self.table[*y][g] {
                        // constants are central and drop out at the next step
                        if let Some(s) = m.first_slot() {
                            let e = next.entry(s).or_insert_with(Scalar::zero);
                            *e = &*e + &(c * d);
                        }
                    }
                }
                next.retain(|_, c| !c.is_zero());
                v = next;
                steps += 1;
            }
        }
        let mut invertible = self.invertible.clone();
        invertible[g] = true;
        Ok(Arc::new(Uea {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            family: self.family,
            names: self.names.clone(),
            index: self.index.clone(),
            table: self.table.clone(),
            invertible,
            atom_cache: DashMap::new(),
            mono_cache: DashMap::new(),
        }))
    }

    pub(crate) fn mul_terms(&self, a: &Terms, b: &Terms) -> Terms {
        let mut acc = Terms::new();
        if a.is_empty() || b.is_empty() {
            return acc;
        }
        for (mb, cb) in b {
            for (ma, ca) in a {
                let c = ca * cb;
                if let Some(p) = ma.concat_if_ordered(mb) {
                    add_term(&mut acc, p, c);
                } else {
                    let t = self.mono_mul(ma, mb);
                    add_scaled(&mut acc, &t, &c);
                }
            }
        }
        acc
    }

    pub(crate) fn mono_mul(&self, a: &Mono, b: &Mono) -> Arc<Terms> {
        if let Some(p) = a.concat_if_ordered(b) {
            return single(p);
        }
        let key = (a.clone(), b.clone());
        let hit = self.mono_cache.get(&key).map(|r| r.clone());
        if let Some(h) = hit {
            return h;
        }
        let mut cur = Terms::new();
        cur.insert(a.clone(), Scalar::one());
        for (slot, &e) in b.exponents().iter().enumerate() {
            for _ in 0..e.unsigned_abs() {
                cur = self.terms_times_atom(&cur, slot, e < 0);
            }
        }
        let out = Arc::new(cur);
        self.mono_cache.insert(key, out.clone());
        out
    }

    fn terms_times_atom(&self, t: &Terms, j: usize, inv: bool) -> Terms {
        let mut acc = Terms::new();
        for (m, c) in t {
            let p = self.mono_times_atom(m, j, inv);
            add_scaled(&mut acc, &p, c);
        }
        acc
    }

    fn mono_times_terms(&self, m: &Mono, t: &Terms) -> Terms {
        let mut acc = Terms::new();
        for (mb, c) in t {
            let p = self.mono_mul(m, mb);
            add_scaled(&mut acc, &p, c);
        }
        acc
    }

    /// `m · g_j^{±1}` in PBW form, moving the new factor left past every
    /// later generator with `yx = xy + [y, x]`.
    fn mono_times_atom(&self, m: &Mono, j: usize, inv: bool) -> Arc<Terms> {
        let step = if inv { -1 } else { 1 };
        match m.last_slot() {
            Some(k) if k > j => {}
            _ => {
                let mut o = m.clone();
                o.0[j] += step;
                return single(o);
            }
        }
        let key = (m.clone(), j, inv);
        let hit = self.atom_cache.get(&key).map(|r| r.clone());
        if let Some(h) = hit {
            return h;
        }
        let k = m.last_slot().expect("checked above");
        let e = m.0[k];
        let yinv = e < 0;
        let mut m2 = m.clone();
        m2.0[k] -= e.signum();
        let left = self.mono_times_atom(&m2, j, inv);
        let mut out = self.terms_times_atom(&left, k, yinv);
        let br = self.atom_bracket((k, yinv), (j, inv));
        if !br.is_empty() {
            let extra = self.mono_times_terms(&m2, &br);
            add_scaled(&mut out, &extra, &Scalar::one());
        }
        let out = Arc::new(out);
        self.atom_cache.insert(key, out.clone());
        out
    }

    fn sandwich(&self, left: &[usize], t: &Terms, right: &[usize]) -> Terms {
        let n = self.n();
        let mut cur = Terms::new();
        cur.insert(Mono::unit(n), Scalar::one());
        for &g in left {
            cur = self.terms_times_atom(&cur, g, true);
        }
        let mut cur = self.mul_terms(&cur, t);
        for &g in right {
            cur = self.terms_times_atom(&cur, g, true);
        }
        cur
    }

    /// Bracket of two atoms, each a generator or the inverse of one.
    fn atom_bracket(&self, a: (usize, bool), b: (usize, bool)) -> Terms {
        let neg = |t: Terms| -> Terms { t.into_iter().map(|(m, c)| (m, -c)).collect() };
        match (a, b) {
            ((x, false), (y, false)) => self.table[x][y].clone(),
            ((x, false), (g, true)) => {
                let t = &self.table[x][g];
                if t.is_empty() {
                    return Terms::new();
                }
                neg(self.sandwich(&[g], t, &[g]))
            }
            ((g, true), (x, false)) => {
                let t = &self.table[x][g];
                if t.is_empty() {
                    return Terms::new();
                }
                self.sandwich(&[g], t, &[g])
            }
            ((g, true), (h, true)) => {
                let t = &self.table[h][g];
                if t.is_empty() {
                    return Terms::new();
                }
                neg(self.sandwich(&[h, g], t, &[g, h]))
            }
        }
    }
}
