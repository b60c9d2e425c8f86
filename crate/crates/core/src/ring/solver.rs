//! Solvers for `A x = b` over the integers.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Finds an integer solution of `A x = b`, where `a` is given row-major.
pub trait IntegerSolver: Send + Sync {
    fn name(&self) -> &'static str;

    /// A complete solver returns `None` only when no integer solution exists.
    fn is_complete(&self) -> bool;

    fn solve(&self, a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>>;
}

/// Column-style Hermite elimination. Unimodular column operations bring
/// `A` to lower echelon form `H = A V`; `H y = b` is then solved by forward
/// substitution with exact divisibility checks and `x = V y`.
pub struct HermiteSolver;

struct Column {
    a: Vec<BigInt>,
    v: Vec<BigInt>,
}

impl Column {
    fn sub_mul(&mut self, q: &BigInt, o: &Column) {
        for (x, y) in self.a.iter_mut().zip(&o.a) {
            *x -= q * y;
        }
        for (x, y) in self.v.iter_mut().zip(&o.v) {
            *x -= q * y;
        }
    }

    fn negate(&mut self) {
        for x in self.a.iter_mut().chain(self.v.iter_mut()) {
            *x = -&*x;
        }
    }

    fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }
}

impl IntegerSolver for HermiteSolver {
    fn name(&self) -> &'static str {
        "hermite"
    }

    fn is_complete(&self) -> bool {
        true
    }

    fn solve(&self, a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
        let m = a.len();
        assert_eq!(b.len(), m, "right-hand side length");
        let n = a.first().map_or(0, Vec::len);
        let (mut free, mut kernel): (Vec<Column>, Vec<Column>) = (0..n)
            .map(|j| Column {
                a: a.iter().map(|row| row[j].clone()).collect(),
                v: (0..n).map(|k| BigInt::from((k == j) as i32)).collect(),
            })
            .partition(|c| !c.is_zero());
        // (pivot row, column)
        let mut pivots: Vec<(usize, Column)> = Vec::new();

        for row in 0..m {
            loop {
                let nz: Vec<usize> = (0..free.len()).filter(|&k| !free[k].a[row].is_zero()).collect();
                if nz.len() <= 1 {
                    break;
                }
                let best = *nz.iter().min_by_key(|&&k| free[k].a[row].abs()).unwrap();
                let piv = std::mem::replace(
                    &mut free[best],
                    Column {
                        a: Vec::new(),
                        v: Vec::new(),
                    },
                );
                for &k in &nz {
                    if k != best {
                        let q = free[k].a[row].div_floor(&piv.a[row]);
                        free[k].sub_mul(&q, &piv);
                    }
                }
                free[best] = piv;
            }
            if let Some(k) = free.iter().position(|c| !c.a[row].is_zero()) {
                let mut c = free.swap_remove(k);
                if c.a[row].is_negative() {
                    c.negate();
                }
                // keep earlier pivot columns small
                for (_, p) in pivots.iter_mut() {
                    let q = p.a[row].div_floor(&c.a[row]);
                    if !q.is_zero() {
                        p.sub_mul(&q, &c);
                    }
                }
                pivots.push((row, c));
            }
            let (keep, done): (Vec<Column>, Vec<Column>) =
                free.into_iter().partition(|c| !c.is_zero());
            free = keep;
            kernel.extend(done);
        }

        let mut residual = b.to_vec();
        let mut x = vec![BigInt::zero(); n];
        let mut next = 0;
        for row in 0..m {
            if next < pivots.len() && pivots[next].0 == row {
                let col = &pivots[next].1;
                let (y, rem) = residual[row].div_rem(&col.a[row]);
                if !rem.is_zero() {
                    return None;
                }
                if !y.is_zero() {
                    for (r, h) in residual.iter_mut().zip(&col.a) {
                        *r -= &y * h;
                    }
                    for (xi, vi) in x.iter_mut().zip(&col.v) {
                        *xi += &y * vi;
                    }
                }
                next += 1;
            } else if !residual[row].is_zero() {
                return None;
            }
        }
        let kernel: Vec<Vec<BigInt>> = kernel.into_iter().map(|c| c.v).collect();
        Some(shorten(x, &kernel))
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Greedily subtracts integer multiples of kernel vectors while that
/// shortens `x`. The result solves the same system.
fn shorten(mut x: Vec<BigInt>, kernel: &[Vec<BigInt>]) -> Vec<BigInt> {
    for _ in 0..32 {
        let mut changed = false;
        for k in kernel {
            let kk = dot(k, k);
            if kk.is_zero() {
                continue;
            }
            // nearest integer to <x,k>/<k,k>
            let two = BigInt::from(2);
            let q = (dot(&x, k) * &two + &kk).div_floor(&(&kk * &two));
            if q.is_zero() {
                continue;
            }
            let y: Vec<BigInt> = x.iter().zip(k).map(|(xi, ki)| xi - &q * ki).collect();
            if dot(&y, &y) < dot(&x, &x) {
                x = y;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    x
}

/// Exhaustive search over coefficient vectors with entries in
/// `[-bound, bound]`, giving up after `budget` candidates. Incomplete, but
/// independent of any elimination.
pub struct EnumerateSolver {
    pub bound: i64,
    pub budget: u64,
}

impl Default for EnumerateSolver {
    fn default() -> Self {
        EnumerateSolver {
            bound: 6,
            budget: 2_000_000,
        }
    }
}

impl IntegerSolver for EnumerateSolver {
    fn name(&self) -> &'static str {
        "enumerate"
    }

    fn is_complete(&self) -> bool {
        false
    }

    fn solve(&self, a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
        let n = a.first().map_or(0, Vec::len);
        let mut x = vec![-self.bound; n];
        let check = |x: &[i64]| {
            a.iter().zip(b).all(|(row, bi)| {
                let s: BigInt = row.iter().zip(x).map(|(r, &xi)| r * xi).sum();
                &s == bi
            })
        };
        let mut tried = 0u64;
        // smallest max-norm first
        for radius in 0..=self.bound {
            x.iter_mut().for_each(|v| *v = -radius);
            loop {
                if x.iter().any(|v| v.abs() == radius) || radius == 0 {
                    if check(&x) {
                        return Some(x.iter().map(|&v| BigInt::from(v)).collect());
                    }
                    tried += 1;
                    if tried > self.budget {
                        return None;
                    }
                }
                let mut k = 0;
                loop {
                    if k == n {
                        break;
                    }
                    if x[k] < radius {
                        x[k] += 1;
                        break;
                    }
                    x[k] = -radius;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
        None
    }
}

/// Named integer solvers.
#[derive(Clone)]
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Arc<dyn IntegerSolver>>,
}

impl Default for SolverRegistry {
    fn default() -> Self {
        let mut r = SolverRegistry {
            solvers: BTreeMap::new(),
        };
        r.register(Arc::new(HermiteSolver));
        r.register(Arc::new(EnumerateSolver::default()));
        r
    }
}

impl SolverRegistry {
    pub fn register(&mut self, s: Arc<dyn IntegerSolver>) {
        self.solvers.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn IntegerSolver>> {
        self.solvers.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.keys().copied().collect()
    }
}
