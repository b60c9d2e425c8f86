//! Iterated intersection of lines through constructed points.
//!
//! Generation `S_0` is `{0, 1}`. Generation `S_{n+1}` holds every
//! intersection `I_{a,b}(p, q)` with `p, q` in `S_n` and `a != b` in the
//! angle set. Since `I_{a,b}(p, q) = I_{a,b}(p, 0) + I_{a,b}(0, q)`, each
//! ordered angle pair contributes the sumset of two images of `S_n`.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{project_to_real_axis, AngleSet, GeometryError, Intersector};
use crate::scalar::{CanonicalKey, ExactScalar, ScalarError};

pub const DEFAULT_MAX_DEPTH: usize = 3;
pub const DEFAULT_MAX_POINTS: usize = 250_000;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("generation {depth} exceeds the cap of {cap} points")]
    CapExceeded {
        depth: usize,
        cap: usize,
        /// The first `cap` points found, in canonical order.
        partial: Box<GenerationSet>,
        /// Generations completed before the cap was hit.
        completed: Vec<GenerationSet>,
    },
    #[error("monomial enumeration exceeds the budget of {0} products")]
    BudgetExceeded(usize),
    #[error("at least two angles are needed, got {0}")]
    TooFewAngles(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<ScalarError> for ConstructionError {
    fn from(e: ScalarError) -> Self {
        ConstructionError::Geometry(e.into())
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionConfig {
    pub angles: AngleSet,
    pub max_depth: usize,
    pub max_points: usize,
}

impl ConstructionConfig {
    pub fn new(angles: AngleSet) -> Self {
        ConstructionConfig {
            angles,
            max_depth: DEFAULT_MAX_DEPTH,
            max_points: DEFAULT_MAX_POINTS,
        }
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn with_max_points(mut self, cap: usize) -> Self {
        self.max_points = cap;
        self
    }
}

/// One generation, keyed and ordered by canonical key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationSet {
    depth: usize,
    points: BTreeMap<CanonicalKey, ExactScalar>,
}

impl GenerationSet {
    /// `S_0 = {0, 1}` in the field of the angles.
    pub fn initial(angles: &AngleSet) -> Self {
        Self::from_points(0, [angles.constant(0), angles.constant(1)])
    }

    pub fn from_points(depth: usize, points: impl IntoIterator<Item = ExactScalar>) -> Self {
        GenerationSet {
            depth,
            points: points.into_iter().map(|p| (p.canonical_key(), p)).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Membership by value; `p` may be written in a subfield, e.g. as a
    /// plain rational.
    pub fn contains(&self, p: &ExactScalar) -> bool {
        if self.points.contains_key(&p.canonical_key()) {
            return true;
        }
        let Some(sample) = self.points.values().next() else {
            return false;
        };
        sample
            .zero_like()
            .checked_add(p)
            .is_ok_and(|v| self.points.contains_key(&v.canonical_key()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalKey, &ExactScalar)> {
        self.points.iter()
    }

    pub fn values(&self) -> impl Iterator<Item = &ExactScalar> {
        self.points.values()
    }

    pub fn is_subset_of(&self, o: &GenerationSet) -> bool {
        self.points.keys().all(|k| o.points.contains_key(k))
    }
}

/// Computes the next generation. Fails with `CapExceeded` as soon as more
/// than `cap` distinct points are found.
pub fn step(g: &GenerationSet, angles: &AngleSet, cap: usize) -> Result<GenerationSet, ConstructionError> {
    if angles.len() < 2 {
        return Err(ConstructionError::TooFewAngles(angles.len()));
    }
    let depth = g.depth + 1;
    let pts: Vec<&ExactScalar> = g.values().collect();
    let mut seen: HashSet<ExactScalar> = HashSet::with_capacity(pts.len().min(cap));
    let mut order: Vec<ExactScalar> = Vec::new();

    let overflow = |order: Vec<ExactScalar>| ConstructionError::CapExceeded {
        depth,
        cap,
        partial: Box::new(GenerationSet::from_points(depth, order)),
        completed: Vec::new(),
    };

    for (i, j) in angles.ordered_pairs() {
        let ix = Intersector::new(angles.get(i), angles.get(j))?;
        let firsts = pts
            .par_iter()
            .map(|p| ix.from_first(p))
            .collect::<Result<Vec<_>, _>>()?;
        let seconds = pts
            .par_iter()
            .map(|q| ix.from_second(q))
            .collect::<Result<Vec<_>, _>>()?;
        let rows: Vec<Vec<ExactScalar>> = firsts
            .par_iter()
            .map(|a| seconds.iter().map(|b| a + b).collect())
            .collect();
        for row in rows {
            for v in row {
                if seen.contains(&v) {
                    continue;
                }
                if order.len() == cap {
                    return Err(overflow(order));
                }
                seen.insert(v.clone());
                order.push(v);
            }
        }
    }
    Ok(GenerationSet::from_points(depth, order))
}

/// Generations `S_0, ..., S_{max_depth}`.
pub fn closure_to_depth(config: &ConstructionConfig) -> Result<Vec<GenerationSet>, ConstructionError> {
    let mut gens = vec![GenerationSet::initial(&config.angles)];
    for _ in 0..config.max_depth {
        let next = match step(gens.last().unwrap(), &config.angles, config.max_points) {
            Ok(n) => n,
            Err(ConstructionError::CapExceeded {
                depth,
                cap,
                partial,
                ..
            }) => {
                return Err(ConstructionError::CapExceeded {
                    depth,
                    cap,
                    partial,
                    completed: gens,
                })
            }
            Err(e) => return Err(e),
        };
        gens.push(next);
    }
    Ok(gens)
}

/// `I_{a,b}(0, 1)` for the ordered pair `(alpha, beta)` of angle indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryMonomial {
    pub alpha: usize,
    pub beta: usize,
    pub value: ExactScalar,
}

fn unit_segment_cut(angles: &AngleSet, i: usize, j: usize) -> Result<ExactScalar, ConstructionError> {
    let ix = Intersector::new(angles.get(i), angles.get(j))?;
    Ok(ix.from_second(&angles.constant(1))?)
}

/// All distinct elementary monomials, in ordered-pair order.
pub fn elementary_monomials(angles: &AngleSet) -> Result<Vec<ElementaryMonomial>, ConstructionError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, j) in angles.ordered_pairs() {
        let value = unit_segment_cut(angles, i, j)?;
        if seen.insert(value.clone()) {
            out.push(ElementaryMonomial {
                alpha: i,
                beta: j,
                value,
            });
        }
    }
    Ok(out)
}

/// Elementary monomials up to `z <-> 1 - z`, from pairs of non-real
/// angles. Pairs involving the real direction only give 0 or 1 and are
/// skipped, as are repeats.
///
/// With exactly three non-real angles `u < v < w` the pairs are taken in
/// the order `(u,w), (u,v), (v,w)`; otherwise lexicographically.
pub fn representatives(angles: &AngleSet) -> Result<Vec<ElementaryMonomial>, ConstructionError> {
    let one = angles.constant(1);
    let non_real: Vec<usize> = (0..angles.len()).filter(|&i| !angles.get(i).is_one()).collect();
    let pairs: Vec<(usize, usize)> = if let [u, v, w] = non_real[..] {
        vec![(u, w), (u, v), (v, w)]
    } else {
        non_real
            .iter()
            .enumerate()
            .flat_map(|(k, &i)| non_real[k + 1..].iter().map(move |&j| (i, j)))
            .collect()
    };
    let mut out: Vec<ElementaryMonomial> = Vec::new();
    for (i, j) in pairs {
        let value = unit_segment_cut(angles, i, j)?;
        let complement = &one - &value;
        if value.is_zero() || value.is_one() {
            continue;
        }
        if out.iter().any(|m| m.value == value || m.value == complement) {
            continue;
        }
        out.push(ElementaryMonomial {
            alpha: i,
            beta: j,
            value,
        });
    }
    Ok(out)
}

/// A real point `I_{1,g}(0, m)` for an elementary monomial `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    /// Angle indices `(a, b)` of `m = I_{a,b}(0,1)`.
    pub pair: (usize, usize),
    /// Angle index of `g`.
    pub along: usize,
    pub value: ExactScalar,
}

#[derive(Clone, Debug)]
pub struct ProjectionSet {
    /// All distinct projections of elementary monomials along non-real
    /// angles, in canonical order.
    pub values: Vec<ExactScalar>,
    /// Generators of the coefficient ring, one per `{p, 1-p}` pair, 0 and 1
    /// excluded. For three non-real angles: each representative projected
    /// along the angle not used to build it, in representative order.
    pub basis: Vec<Projection>,
    /// `I_{1,v}(0, I_{u,w}(0,1))` for the first three non-real angles
    /// `u < v < w`, when there are at least three.
    pub distinguished: Option<ExactScalar>,
    /// Whether `values` equals `{0, 1, x, 1-x, 1/x, 1-1/x, 1/(1-x), x/(x-1)}`
    /// for the distinguished `x`; checked for four angles including 1.
    pub normal_form_holds: Option<bool>,
}

impl ProjectionSet {
    pub fn basis_values(&self) -> Vec<ExactScalar> {
        self.basis.iter().map(|p| p.value.clone()).collect()
    }
}

/// The six images of `x` under the anharmonic group, with 0 and 1.
pub fn anharmonic_orbit(x: &ExactScalar) -> Result<Vec<ExactScalar>, ScalarError> {
    let one = x.one_like();
    let inv = x.inv()?;
    Ok(vec![
        x.zero_like(),
        one.clone(),
        x.clone(),
        &one - x,
        inv.clone(),
        &one - &inv,
        (&one - x).inv()?,
        x.checked_div(&(x - &one))?,
    ])
}

pub fn projection_set(angles: &AngleSet) -> Result<ProjectionSet, ConstructionError> {
    if angles.len() < 2 {
        return Err(ConstructionError::TooFewAngles(angles.len()));
    }
    let one = angles.constant(1);
    let mut values: BTreeMap<CanonicalKey, ExactScalar> = BTreeMap::new();
    let mut found: Vec<Projection> = Vec::new();
    for m in elementary_monomials(angles)? {
        for (g, dir) in angles.angles().iter().enumerate() {
            if dir.is_one() {
                continue;
            }
            let value = project_to_real_axis(&m.value, dir)?;
            values.insert(value.canonical_key(), value.clone());
            found.push(Projection {
                pair: (m.alpha, m.beta),
                along: g,
                value,
            });
        }
    }

    let non_real: Vec<usize> = (0..angles.len()).filter(|&i| !angles.get(i).is_one()).collect();
    let mut basis: Vec<Projection> = Vec::new();
    if non_real.len() == 3 {
        for r in representatives(angles)? {
            if let Some(&along) = non_real.iter().find(|&&k| k != r.alpha && k != r.beta) {
                let value = project_to_real_axis(&r.value, angles.get(along))?;
                basis.push(Projection {
                    pair: (r.alpha, r.beta),
                    along,
                    value,
                });
            }
        }
    }
    let extra: Vec<Projection> = found
        .into_iter()
        .filter(|p| !p.value.is_zero() && !p.value.is_one())
        .collect();
    for p in extra {
        let complement = &one - &p.value;
        if basis
            .iter()
            .all(|b| b.value != p.value && b.value != complement)
        {
            basis.push(p);
        }
    }

    let (distinguished, normal_form_holds) = if non_real.len() >= 3 {
        let (u, v, w) = (non_real[0], non_real[1], non_real[2]);
        let x = project_to_real_axis(&unit_segment_cut(angles, u, w)?, angles.get(v))?;
        let holds = if non_real.len() == 3 && angles.contains_one() {
            let orbit: BTreeMap<CanonicalKey, ExactScalar> = anharmonic_orbit(&x)?
                .into_iter()
                .map(|e| (e.canonical_key(), e))
                .collect();
            Some(orbit.keys().eq(values.keys()))
        } else {
            None
        };
        (Some(x), holds)
    } else {
        (None, None)
    };

    Ok(ProjectionSet {
        values: values.into_values().collect(),
        basis,
        distinguished,
        normal_form_holds,
    })
}

/// A product of elementary monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    /// Ordered angle pairs of the factors, sorted.
    pub factors: Vec<(usize, usize)>,
    pub value: ExactScalar,
}

/// Distinct values of products of at most `max_len` elementary monomials
/// (including the empty product 1), first occurrence kept. Fails once
/// more than `budget` distinct values are found.
pub fn monomials_to_length(
    angles: &AngleSet,
    max_len: usize,
    budget: usize,
) -> Result<Vec<Monomial>, ConstructionError> {
    let elem = elementary_monomials(angles)?;
    let mut seen: HashSet<ExactScalar> = HashSet::new();
    let one = angles.constant(1);
    seen.insert(one.clone());
    let mut out = vec![Monomial {
        factors: Vec::new(),
        value: one,
    }];
    // frontier: products of exactly `len` factors, factors non-decreasing
    let mut frontier: Vec<(usize, Monomial)> = vec![(0, out[0].clone())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (start, m) in &frontier {
            for (k, e) in elem.iter().enumerate().skip(*start) {
                let value = &m.value * &e.value;
                let mut factors = m.factors.clone();
                factors.push((e.alpha, e.beta));
                let mono = Monomial { factors, value };
                if seen.insert(mono.value.clone()) {
                    if out.len() == budget {
                        return Err(ConstructionError::BudgetExceeded(budget));
                    }
                    out.push(mono.clone());
                }
                next.push((k, mono));
            }
        }
        frontier = next;
    }
    Ok(out)
}
