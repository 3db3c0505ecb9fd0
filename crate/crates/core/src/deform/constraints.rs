use crate::field::{solve_binomial, PMono, Relation, Scalar, Solved, Symbol};

/// Outcome of solving the scalar constraints for the seed constants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    /// Distinct normalized constraints `e = 0`.
    pub constraints: Vec<Scalar>,
    pub relations: Vec<Relation>,
    /// Constraints left over after solving, recorded verbatim.
    pub unsolved: Vec<Scalar>,
}

/// Numerator of `e`, made monic, with monomial factors removed: seed
/// constants are nonzero, and so are parameters once `e` has several
/// terms (a lone monomial is kept, it says which parameter must vanish).
pub fn normalize(e: &Scalar, unknowns: &[Symbol]) -> Scalar {
    let n = e.numer();
    if n.is_zero() {
        return Scalar::zero();
    }
    let several = n.terms().len() > 1;
    let content: PMono = n.mono_content().into_iter().filter(|(v, _)| several || unknowns.contains(v)).collect();
    let stripped = n.div_mono(&content).expect("content divides every term");
    Scalar::from_poly(stripped.monic())
}

/// Applies solved relations: linear ones by substitution in order, then
/// squares by reduction.
pub fn apply_relations(e: &Scalar, rels: &[Relation]) -> Scalar {
    let mut out = e.clone();
    for r in rels {
        if let Relation::Value(x, v) = r {
            if out.contains_var(*x) {
                out = out.subs_one(*x, v).unwrap_or(out);
            }
        }
    }
    for r in rels {
        if let Relation::Square(x, v) = r {
            out = out.reduce_square(*x, v);
        }
    }
    out
}

fn unknowns_in(e: &Scalar, unknowns: &[Symbol], solved: &[Symbol]) -> Vec<Symbol> {
    unknowns.iter().copied().filter(|x| e.contains_var(*x) && !solved.contains(x)).collect()
}

fn push_unique(v: &mut Vec<Scalar>, e: Scalar) {
    if !e.is_zero() && !v.contains(&e) {
        v.push(e);
    }
}

/// Solves `e = 0` for every `e` in `eqs`, one unknown at a time: fewest
/// unknowns first, lowest degree first.
pub fn solve_constraints(eqs: &[Scalar], unknowns: &[Symbol]) -> Solution {
    let mut constraints = Vec::new();
    for e in eqs {
        push_unique(&mut constraints, normalize(e, unknowns));
    }
    let mut rels: Vec<Relation> = Vec::new();
    let mut pending = constraints.clone();
    loop {
        let solved: Vec<Symbol> = rels.iter().map(|r| r.unknown()).collect();
        let mut next = Vec::new();
        for e in &pending {
            push_unique(&mut next, normalize(&apply_relations(e, &rels), unknowns));
        }
        pending = next;
        if pending.is_empty() {
            break;
        }
        let mut order: Vec<(usize, u32, usize)> = pending
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let xs = unknowns_in(e, unknowns, &solved);
                let deg = xs.iter().map(|x| e.numer().degree_in(*x)).sum();
                (xs.len(), deg, i)
            })
            .collect();
        order.sort_unstable();
        let mut found = None;
        'outer: for &(count, _, i) in &order {
            if count == 0 {
                continue;
            }
            let e = &pending[i];
            let mut xs = unknowns_in(e, unknowns, &solved);
            xs.sort_by_key(|x| e.numer().degree_in(*x));
            for x in xs {
                if let Solved::Relation(r) = solve_binomial(e, x) {
                    found = Some(r);
                    break 'outer;
                }
            }
        }
        match found {
            Some(r) => rels.push(r),
            None => break,
        }
    }
    Solution { constraints, relations: rels, unsolved: pending }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Scalar {
        Scalar::var(n)
    }

    #[test]
    fn two_unknowns_from_a_square_and_a_product() {
        let (a1, a2, c1, c2, g) = (v("α1"), v("α2"), v("c1"), v("c2"), v("γ"));
        // -8 α2 (α1 c1 + α2 c2) and γ² - 4 α2² c1 c2
        let e1 = &Scalar::from_int(-8) * &(&a2 * &(&(&a1 * &c1) + &(&a2 * &c2)));
        let e2 = &(&g * &g) - &(&Scalar::from_int(4) * &(&(&a2 * &a2) * &(&c1 * &c2)));
        let xs = [Symbol::new("α1"), Symbol::new("α2")];
        let s = solve_constraints(&[e1.clone(), e2.clone()], &xs);
        assert!(s.unsolved.is_empty());
        assert_eq!(s.relations.len(), 2);
        let want2 = &(&g * &g) / &(&Scalar::from_int(4) * &(&c1 * &c2));
        assert_eq!(s.relations[0], Relation::Square(xs[1], want2));
        assert_eq!(s.relations[1], Relation::Value(xs[0], -(&(&a2 * &c2) / &c1)));
        assert!(apply_relations(&e1, &s.relations).is_zero());
        assert!(apply_relations(&e2, &s.relations).is_zero());
    }

    #[test]
    fn unknown_free_constraint_is_left_over() {
        let l = v("λ");
        let s = solve_constraints(&[&l * &l], &[Symbol::new("α1")]);
        assert!(s.relations.is_empty());
        assert_eq!(s.unsolved.len(), 1);
    }
}
