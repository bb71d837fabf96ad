use std::collections::BTreeMap;

use super::{Bidegree, BigradedComplex, BigradedTerm, GradedError, OpenEdges, Slice, Window};
use crate::exactla::{Field, SparseMatrix};

fn sign(field: Field, exponent: i64) -> crate::exactla::FieldScalar {
    field.from_i64(if exponent.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn same_field(x: &BigradedComplex, y: &BigradedComplex) -> Result<Field, GradedError> {
    if x.field() != y.field() {
        return Err(GradedError::FieldMismatch {
            expected: x.field(),
            found: y.field(),
        });
    }
    Ok(x.field())
}

fn assemble_terms(slices: BTreeMap<Bidegree, Slice>) -> Vec<BigradedTerm> {
    let mut terms: BTreeMap<i64, BigradedTerm> = BTreeMap::new();
    for ((p, t), s) in slices {
        terms
            .entry(p)
            .or_insert_with(|| BigradedTerm {
                position: p,
                slices: BTreeMap::new(),
            })
            .slices
            .insert(t, s);
    }
    terms.into_values().collect()
}

/// Range of sums `a + b` (a in `x`, b in `y`) that see every contributing pair, given
/// which sides of each factor continue past its window.
fn complete_sum_range(
    x: (i64, i64),
    x_open: (bool, bool),
    y: (i64, i64),
    y_open: (bool, bool),
) -> Result<(i64, i64), GradedError> {
    if (x_open.0 && y_open.1) || (x_open.1 && y_open.0) {
        return Err(GradedError::Invalid(
            "factors continue in opposite directions; no bidegree is complete".into(),
        ));
    }
    let mut lo = x.0 + y.0;
    let mut hi = x.1 + y.1;
    if x_open.0 {
        lo = lo.max(x.0 + y.1);
    }
    if y_open.0 {
        lo = lo.max(y.0 + x.1);
    }
    if x_open.1 {
        hi = hi.min(x.1 + y.0);
    }
    if y_open.1 {
        hi = hi.min(y.1 + x.0);
    }
    Ok((lo, hi))
}

/// Tensor product over the ground field with the Koszul sign rule
/// `d(u⊗v) = du⊗v + (−1)^{|u|} u⊗dv`.
///
/// The basis of each slice lists the summands `X^{p,s}⊗Y^{q,u}` by increasing `p`, then
/// increasing `s`; inside a summand the index of `X` is the outer one. The window is cut
/// down to the bidegrees where no summand is lost to truncation of either factor.
pub fn tensor(x: &BigradedComplex, y: &BigradedComplex) -> Result<BigradedComplex, GradedError> {
    let field = same_field(x, y)?;
    let (wx, wy) = (x.window(), y.window());
    let pos = complete_sum_range(
        (wx.min_pos, wx.max_pos),
        (wx.open.pos_below, wx.open.pos_above),
        (wy.min_pos, wy.max_pos),
        (wy.open.pos_below, wy.open.pos_above),
    )?;
    let deg = complete_sum_range(
        (wx.min_deg, wx.max_deg),
        (wx.open.deg_below, wx.open.deg_above),
        (wy.min_deg, wy.max_deg),
        (wy.open.deg_below, wy.open.deg_above),
    )?;
    let window = Window::closed(pos, deg).with_open(OpenEdges {
        pos_below: wx.open.pos_below || wy.open.pos_below,
        pos_above: wx.open.pos_above || wy.open.pos_above,
        deg_below: wx.open.deg_below || wy.open.deg_below,
        deg_above: wx.open.deg_above || wy.open.deg_above,
    });

    // summand layout: (n, t) -> list of ((p, s), (q, u), offset)
    type Layout = BTreeMap<Bidegree, Vec<(Bidegree, Bidegree, usize)>>;
    let mut layout: Layout = BTreeMap::new();
    let mut slices: BTreeMap<Bidegree, Slice> = BTreeMap::new();
    let xs = x.support();
    let ys = y.support();
    let mut pairs: Vec<(Bidegree, Bidegree)> = Vec::new();
    for &a in &xs {
        for &b in &ys {
            if window.contains((a.0 + b.0, a.1 + b.1)) {
                pairs.push((a, b));
            }
        }
    }
    pairs.sort();
    for (a, b) in pairs {
        let key = (a.0 + b.0, a.1 + b.1);
        let slice = slices.entry(key).or_insert_with(|| Slice::new(Vec::new()));
        let offset = slice.dim;
        for lx in x.labels(a.0, a.1) {
            for ly in y.labels(b.0, b.1) {
                slice.labels.push(format!("{lx}⊗{ly}"));
            }
        }
        slice.dim = slice.labels.len();
        layout.entry(key).or_default().push((a, b, offset));
    }

    let offset_of = |key: Bidegree, a: Bidegree, b: Bidegree| -> Option<usize> {
        layout
            .get(&key)?
            .iter()
            .find(|(aa, bb, _)| *aa == a && *bb == b)
            .map(|e| e.2)
    };

    let mut differentials = BTreeMap::new();
    for (&(n, t), summands) in &layout {
        let target_key = (n + 1, t);
        let Some(target) = slices.get(&target_key) else {
            continue;
        };
        let source_dim = slices[&(n, t)].dim;
        let mut triplets = Vec::new();
        for &(a, b, off) in summands {
            let (dx, dy) = (x.dim(a.0, a.1), y.dim(b.0, b.1));
            if let Some(d) = x.d_ref(a.0, a.1) {
                if let Some(to) = offset_of(target_key, (a.0 + 1, a.1), b) {
                    let blk = d.kron(&SparseMatrix::identity(field, dy))?;
                    triplets.extend(blk.entries().iter().map(|(r, c, v)| (r + to, c + off, v.clone())));
                }
            }
            if let Some(d) = y.d_ref(b.0, b.1) {
                if let Some(to) = offset_of(target_key, a, (b.0 + 1, b.1)) {
                    let blk = SparseMatrix::identity(field, dx).kron(d)?.scale(&sign(field, a.0));
                    triplets.extend(blk.entries().iter().map(|(r, c, v)| (r + to, c + off, v.clone())));
                }
            }
        }
        differentials.insert(
            (n, t),
            SparseMatrix::from_triplets(field, target.dim, source_dim, triplets),
        );
    }
    BigradedComplex::build(field, window, assemble_terms(slices), differentials)
}

/// The Hom complex: position `n` collects `Hom(X^p, Y^{p+n})` and internal degree `t`
/// collects `Hom(X^{·,s}, Y^{·,s+t})`, with `d(f) = d_Y∘f − (−1)^n f∘d_X`.
///
/// `X` must be bounded in position. Summands are ordered by increasing `p`, then `s`; a
/// map `f` is stored row-major (target index outer). Bidegrees that would need slices of
/// either complex beyond its window are cut off.
pub fn hom_complex(x: &BigradedComplex, y: &BigradedComplex) -> Result<BigradedComplex, GradedError> {
    let field = same_field(x, y)?;
    let (wx, wy) = (x.window(), y.window());
    if !wx.is_position_bounded() {
        return Err(GradedError::Unbounded);
    }
    let mut plo = wy.min_pos - wx.max_pos;
    let mut phi = wy.max_pos - wx.min_pos;
    if wy.open.pos_above {
        phi = phi.min(wy.max_pos - wx.max_pos);
    }
    if wy.open.pos_below {
        plo = plo.max(wy.min_pos - wx.min_pos);
    }
    if (wx.open.deg_above && wy.open.deg_above) || (wx.open.deg_below && wy.open.deg_below) {
        return Err(GradedError::Invalid(
            "both complexes continue in the same degree direction; Hom slices are infinite".into(),
        ));
    }
    let mut tlo = wy.min_deg - wx.max_deg;
    let mut thi = wy.max_deg - wx.min_deg;
    if wx.open.deg_above {
        tlo = tlo.max(wy.max_deg - wx.max_deg);
    }
    if wx.open.deg_below {
        thi = thi.min(wy.min_deg - wx.min_deg);
    }
    if wy.open.deg_above {
        thi = thi.min(wy.max_deg - wx.max_deg);
    }
    if wy.open.deg_below {
        tlo = tlo.max(wy.min_deg - wx.min_deg);
    }
    let window = Window::closed((plo, phi), (tlo, thi)).with_open(OpenEdges {
        pos_below: wy.open.pos_below,
        pos_above: wy.open.pos_above,
        deg_below: wy.open.deg_below || wx.open.deg_above,
        deg_above: wy.open.deg_above || wx.open.deg_below,
    });

    // (n, t) -> list of (source bidegree a in X, offset); the target is a + (n, t)
    let mut layout: BTreeMap<Bidegree, Vec<(Bidegree, usize)>> = BTreeMap::new();
    let mut slices: BTreeMap<Bidegree, Slice> = BTreeMap::new();
    let mut pairs: Vec<(Bidegree, Bidegree)> = Vec::new();
    for a in x.support() {
        for b in y.support() {
            let key = (b.0 - a.0, b.1 - a.1);
            if window.contains(key) {
                pairs.push((key, a));
            }
        }
    }
    pairs.sort();
    for (key, a) in pairs {
        let b = (a.0 + key.0, a.1 + key.1);
        let slice = slices.entry(key).or_insert_with(|| Slice::new(Vec::new()));
        let offset = slice.dim;
        for ly in y.labels(b.0, b.1) {
            for lx in x.labels(a.0, a.1) {
                slice.labels.push(format!("{lx}*⊗{ly}"));
            }
        }
        slice.dim = slice.labels.len();
        layout.entry(key).or_default().push((a, offset));
    }
    let offset_of =
        |key: Bidegree, a: Bidegree| -> Option<usize> { layout.get(&key)?.iter().find(|e| e.0 == a).map(|e| e.1) };

    let mut differentials = BTreeMap::new();
    for (&(n, t), summands) in &layout {
        let target_key = (n + 1, t);
        let Some(target) = slices.get(&target_key) else {
            continue;
        };
        let source_dim = slices[&(n, t)].dim;
        let mut triplets = Vec::new();
        let minus_sign = sign(field, n + 1);
        for &(a, off) in summands {
            let b = (a.0 + n, a.1 + t);
            let dim_x = x.dim(a.0, a.1);
            // d_Y ∘ f lands in Hom(X^a, Y^{b+1})
            if let (Some(d), Some(to)) = (y.d_ref(b.0, b.1), offset_of(target_key, a)) {
                let blk = d.kron(&SparseMatrix::identity(field, dim_x))?;
                triplets.extend(blk.entries().iter().map(|(r, c, v)| (r + to, c + off, v.clone())));
            }
            // f ∘ d_X for f on X^a contributes to Hom(X^{a−1}, Y^b)
            let prev = (a.0 - 1, a.1);
            if let (Some(d), Some(to)) = (x.d_ref(prev.0, prev.1), offset_of(target_key, prev)) {
                let dim_y = y.dim(b.0, b.1);
                let blk = SparseMatrix::identity(field, dim_y)
                    .kron(&d.transpose())?
                    .scale(&minus_sign);
                triplets.extend(blk.entries().iter().map(|(r, c, v)| (r + to, c + off, v.clone())));
            }
        }
        differentials.insert(
            (n, t),
            SparseMatrix::from_triplets(field, target.dim, source_dim, triplets),
        );
    }
    BigradedComplex::build(field, window, assemble_terms(slices), differentials)
}

/// Vector-space dual: positions and internal degrees negated, differentials transposed
/// (no signs), labels suffixed with `*`.
pub fn dualize(x: &BigradedComplex) -> BigradedComplex {
    let w = x.window();
    let window = Window::closed((-w.max_pos, -w.min_pos), (-w.max_deg, -w.min_deg)).with_open(OpenEdges {
        pos_below: w.open.pos_above,
        pos_above: w.open.pos_below,
        deg_below: w.open.deg_above,
        deg_above: w.open.deg_below,
    });
    let slices = x
        .support()
        .into_iter()
        .map(|(p, t)| {
            let labels = x.labels(p, t).iter().map(|l| dual_label(l)).collect();
            ((-p, -t), Slice::new(labels))
        })
        .collect();
    let differentials = x
        .differentials()
        .iter()
        .map(|(&(p, t), d)| ((-p - 1, -t), d.transpose()))
        .collect();
    BigradedComplex::build(x.field(), window, assemble_terms(slices), differentials)
        .expect("dual of a valid complex is valid")
}

fn dual_label(l: &str) -> String {
    match l.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{l}*"),
    }
}

/// Moves the slice at `(p, t)` to `(p − positions, t + degrees)` and multiplies the
/// differential by `(−1)^positions`, so `shift(x, 1, 0)` is the usual `X[1]`.
pub fn shift(x: &BigradedComplex, positions: i64, degrees: i64) -> BigradedComplex {
    let w = x.window();
    let window = Window::closed(
        (w.min_pos - positions, w.max_pos - positions),
        (w.min_deg + degrees, w.max_deg + degrees),
    )
    .with_open(w.open);
    let slices = x
        .support()
        .into_iter()
        .map(|(p, t)| ((p - positions, t + degrees), x.slice(p, t).unwrap().clone()))
        .collect();
    let s = sign(x.field(), positions);
    let differentials = x
        .differentials()
        .iter()
        .map(|(&(p, t), d)| ((p - positions, t + degrees), d.scale(&s)))
        .collect();
    BigradedComplex::build(x.field(), window, assemble_terms(slices), differentials)
        .expect("shift of a valid complex is valid")
}

/// Negates internal degrees, leaving positions, labels and matrices alone.
pub fn reflect_internal(x: &BigradedComplex) -> BigradedComplex {
    let w = x.window();
    let window = Window::closed((w.min_pos, w.max_pos), (-w.max_deg, -w.min_deg)).with_open(OpenEdges {
        deg_below: w.open.deg_above,
        deg_above: w.open.deg_below,
        ..w.open
    });
    let slices = x
        .support()
        .into_iter()
        .map(|(p, t)| ((p, -t), x.slice(p, t).unwrap().clone()))
        .collect();
    let differentials = x
        .differentials()
        .iter()
        .map(|(&(p, t), d)| ((p, -t), d.clone()))
        .collect();
    BigradedComplex::build(x.field(), window, assemble_terms(slices), differentials)
        .expect("regrading a valid complex is valid")
}

/// Forgets the internal grading: each term becomes one slice in degree 0, concatenating
/// the old slices by increasing degree.
pub fn collapse_internal(x: &BigradedComplex) -> BigradedComplex {
    let w = x.window();
    let window = Window::closed((w.min_pos, w.max_pos), (0, 0)).with_open(OpenEdges {
        pos_below: w.open.pos_below,
        pos_above: w.open.pos_above,
        ..Default::default()
    });
    let mut offsets: BTreeMap<Bidegree, usize> = BTreeMap::new();
    let mut slices: BTreeMap<Bidegree, Slice> = BTreeMap::new();
    for (p, term) in x.terms() {
        let mut labels = Vec::new();
        for (t, s) in &term.slices {
            offsets.insert((*p, *t), labels.len());
            labels.extend(s.labels.iter().cloned());
        }
        slices.insert((*p, 0), Slice::new(labels));
    }
    let mut blocks: BTreeMap<i64, Vec<(usize, usize, SparseMatrix)>> = BTreeMap::new();
    for (&(p, t), d) in x.differentials() {
        blocks
            .entry(p)
            .or_default()
            .push((offsets[&(p + 1, t)], offsets[&(p, t)], d.clone()));
    }
    let differentials = blocks
        .into_iter()
        .map(|(p, bs)| {
            let refs: Vec<(usize, usize, &SparseMatrix)> = bs.iter().map(|(r, c, m)| (*r, *c, m)).collect();
            let m = SparseMatrix::assemble(x.field(), slices[&(p + 1, 0)].dim, slices[&(p, 0)].dim, &refs);
            ((p, 0), m)
        })
        .collect();
    BigradedComplex::build(x.field(), window, assemble_terms(slices), differentials)
        .expect("collapse of a valid complex is valid")
}

/// Direct sum; at every bidegree the basis of `x` comes first.
pub fn direct_sum(x: &BigradedComplex, y: &BigradedComplex) -> Result<BigradedComplex, GradedError> {
    let field = same_field(x, y)?;
    let (wx, wy) = (x.window(), y.window());
    let window = Window::closed(
        (wx.min_pos.min(wy.min_pos), wx.max_pos.max(wy.max_pos)),
        (wx.min_deg.min(wy.min_deg), wx.max_deg.max(wy.max_deg)),
    )
    .with_open(OpenEdges {
        pos_below: wx.open.pos_below || wy.open.pos_below,
        pos_above: wx.open.pos_above || wy.open.pos_above,
        deg_below: wx.open.deg_below || wy.open.deg_below,
        deg_above: wx.open.deg_above || wy.open.deg_above,
    });
    let mut keys: Vec<Bidegree> = x.support();
    keys.extend(y.support());
    keys.sort();
    keys.dedup();
    let slices = keys
        .iter()
        .map(|&(p, t)| {
            let mut labels = x.labels(p, t).to_vec();
            labels.extend(y.labels(p, t).iter().cloned());
            ((p, t), Slice::new(labels))
        })
        .collect();
    let mut dkeys: Vec<Bidegree> = x.differentials().keys().copied().collect();
    dkeys.extend(y.differentials().keys().copied());
    dkeys.sort();
    dkeys.dedup();
    let differentials = dkeys
        .into_iter()
        .map(|(p, t)| ((p, t), SparseMatrix::block_diag(field, &[&x.d(p, t), &y.d(p, t)])))
        .collect();
    BigradedComplex::build(field, window, assemble_terms(slices), differentials)
}

/// True when `y` is obtained from `x` by rescaling each slice by ±1, i.e. the two have
/// the same slice dimensions and every differential block agrees up to a sign that is
/// consistent along each internal degree. Labels and windows are ignored.
pub fn equal_up_to_signs(x: &BigradedComplex, y: &BigradedComplex) -> bool {
    if x.field() != y.field() || x.support() != y.support() {
        return false;
    }
    if x.support().iter().any(|&(p, t)| x.dim(p, t) != y.dim(p, t)) {
        return false;
    }
    let field = x.field();
    let neg = field.from_i64(-1);
    for t in x.occupied_degrees() {
        let positions: Vec<i64> = x.support().into_iter().filter(|b| b.1 == t).map(|b| b.0).collect();
        let mut eps: BTreeMap<i64, bool> = BTreeMap::new();
        for &p in &positions {
            let cur = *eps.entry(p).or_insert(false);
            let (dx, dy) = (x.d(p, t), y.d(p, t));
            let flip = if dx == dy {
                false
            } else if dx.scale(&neg) == dy {
                true
            } else {
                return false;
            };
            eps.insert(p + 1, cur ^ flip);
        }
    }
    true
}

/// Adds a one-dimensional term `k` in internal degree 0 at a position adjacent to the window,
/// joined to the one-dimensional degree-0 slice next to it by the identity.
pub fn attach_unit(x: &BigradedComplex, at: i64) -> Result<BigradedComplex, GradedError> {
    let w = x.window();
    let (neighbour, incoming) = if at == w.min_pos - 1 {
        (w.min_pos, false)
    } else if at == w.max_pos + 1 {
        (w.max_pos, true)
    } else {
        return Err(GradedError::Invalid(format!(
            "position {at} is not adjacent to the window"
        )));
    };
    if x.dim(neighbour, 0) != 1 || !w.contains((neighbour, 0)) {
        return Err(GradedError::Invalid(
            "augmentation needs a one-dimensional degree-0 slice".into(),
        ));
    }
    let field = x.field();
    let window = Window::closed((w.min_pos.min(at), w.max_pos.max(at)), (w.min_deg, w.max_deg)).with_open(w.open);
    let mut terms: Vec<BigradedTerm> = x.terms().values().cloned().collect();
    terms.push(BigradedTerm {
        position: at,
        slices: BTreeMap::from([(0, Slice::new(vec!["1".into()]))]),
    });
    let mut diffs = x.differentials().clone();
    let p = if incoming { neighbour } else { at };
    diffs.insert((p, 0), SparseMatrix::identity(field, 1));
    BigradedComplex::build(field, window, terms, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedcomplex::{cohomology, ComplexBuilder};

    fn id_complex(f: Field, p: i64) -> BigradedComplex {
        let mut b = ComplexBuilder::new(f, Window::closed((p, p + 1), (0, 0)));
        b.slice(p, 0, Slice::anonymous(1, "a"))
            .slice(p + 1, 0, Slice::anonymous(1, "b"))
            .differential(p, 0, SparseMatrix::identity(f, 1));
        b.build().unwrap()
    }

    #[test]
    fn tensor_with_unit_is_identity() {
        let f = Field::Prime(101);
        let x = id_complex(f, 0);
        let u = BigradedComplex::unit(f, (0, 0));
        let xu = tensor(&x, &u).unwrap();
        assert!(equal_up_to_signs(&xu, &x));
        let xx = tensor(&x, &x).unwrap();
        assert!(cohomology(&xx).is_acyclic());
        assert_eq!(xx.dim(1, 0), 2);
    }

    #[test]
    fn hom_from_and_into_unit() {
        let f = Field::Rational;
        let x = id_complex(f, 0);
        let u = BigradedComplex::unit(f, (0, 0));
        assert!(equal_up_to_signs(&hom_complex(&u, &x).unwrap(), &x));
        let hx = hom_complex(&x, &u).unwrap();
        assert!(equal_up_to_signs(&hx, &dualize(&x)));
        assert_eq!(hx.dim(-1, 0), 1);
    }

    #[test]
    fn dual_of_identity_moves_positions() {
        let f = Field::Rational;
        let d = dualize(&id_complex(f, 0));
        assert_eq!((d.dim(-1, 0), d.dim(0, 0)), (1, 1));
        assert_eq!(d.d(-1, 0), SparseMatrix::identity(f, 1));
        assert_eq!(dualize(&d), id_complex(f, 0));
    }

    #[test]
    fn collapse_and_sum_preserve_cohomology_totals() {
        let f = Field::Prime(7);
        let x = id_complex(f, 0);
        let u = BigradedComplex::unit(f, (1, 3));
        let s = direct_sum(&x, &u).unwrap();
        let h = cohomology(&collapse_internal(&s));
        assert_eq!(h.total(), 1);
        assert_eq!(h.dim(1, 0), 1);
    }

    #[test]
    fn shift_negates_differential() {
        let f = Field::Prime(7);
        let s = shift(&id_complex(f, 0), 1, 2);
        assert_eq!(s.dim(-1, 2), 1);
        assert_eq!(s.d(-1, 2), SparseMatrix::identity(f, 1).scale(&f.from_i64(-1)));
    }
}
