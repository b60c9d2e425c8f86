//! JSON renderings of library values.

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use origami_ring::construction::{Projection, ProjectionSet};
use origami_ring::density::DensityWitness;
use origami_ring::export::format_interval;
use origami_ring::geometry::AngleSet;
use origami_ring::ring::{QuadraticTest, RingContext, RingVerdict};
use origami_ring::scalar::{ExactScalar, ScalarError};

/// Evaluation context shared by every rendered value.
pub struct Render<'a> {
    pub precision: u32,
    pub theta: Option<&'a BigRational>,
}

impl Render<'_> {
    pub fn scalar(&self, v: &ExactScalar) -> Result<Value, ScalarError> {
        let iv = v.to_interval(self.precision, self.theta)?;
        let [re_lo, re_hi, im_lo, im_hi] = format_interval(&iv);
        Ok(json!({
            "exact": v.to_string(),
            "key": v.canonical_key().to_string(),
            "re": [re_lo, re_hi],
            "im": [im_lo, im_hi],
        }))
    }

    pub fn pair(angles: &AngleSet, (a, b): (usize, usize)) -> Value {
        json!([angles.get(a).label(), angles.get(b).label()])
    }

    pub fn projection(&self, angles: &AngleSet, id: usize, p: &Projection) -> Result<Value, ScalarError> {
        Ok(json!({
            "id": id,
            "monomial": Self::pair(angles, p.pair),
            "along": angles.get(p.along).label(),
            "value": self.scalar(&p.value)?,
        }))
    }

    pub fn projection_set(&self, angles: &AngleSet, ps: &ProjectionSet) -> Result<Value, ScalarError> {
        Ok(json!({
            "values": ps.values.iter().map(|v| self.scalar(v)).collect::<Result<Vec<_>, _>>()?,
            "basis": ps.basis.iter().enumerate()
                .map(|(i, p)| self.projection(angles, i, p))
                .collect::<Result<Vec<_>, _>>()?,
            "distinguished": ps.distinguished.as_ref().map(|x| self.scalar(x)).transpose()?,
            "normal_form_holds": ps.normal_form_holds,
        }))
    }

    /// Generator and projection listings that certificate ids refer to.
    pub fn ring_context(&self, ctx: &RingContext) -> Result<Value, ScalarError> {
        let mut gens = vec![json!({"id": 0, "monomial": null, "value": self.scalar(&ctx.generators[0])?})];
        for (k, pair) in ctx.generator_pairs.iter().enumerate() {
            gens.push(json!({
                "id": k + 1,
                "monomial": Self::pair(&ctx.angles, *pair),
                "value": self.scalar(&ctx.generators[k + 1])?,
            }));
        }
        Ok(json!({
            "generators": gens,
            "projections": ctx.projections.basis.iter().enumerate()
                .map(|(i, p)| self.projection(&ctx.angles, i, p))
                .collect::<Result<Vec<_>, _>>()?,
        }))
    }

    pub fn quadratic(&self, q: &QuadraticTest) -> Result<Value, ScalarError> {
        Ok(json!({
            "x": self.scalar(&q.x)?,
            "trace": self.scalar(&q.trace)?,
            "norm": self.scalar(&q.norm)?,
            "lambda": q.relation.as_ref().map(|(l, _)| l.to_string()),
            "mu": q.relation.as_ref().map(|(_, m)| m.to_string()),
        }))
    }

    pub fn verdict(&self, ctx: &RingContext, v: &RingVerdict) -> Result<Value, ScalarError> {
        let mut out = self.ring_context(ctx)?;
        let obj = out.as_object_mut().expect("object");
        obj.insert("verdict".into(), json!(v.label()));
        match v {
            RingVerdict::RingLattice(q) | RingVerdict::NotRing(q) => {
                obj.insert("path".into(), json!("lattice"));
                obj.insert("quadratic".into(), self.quadratic(q)?);
                obj.insert("certificates".into(), json!([]));
            }
            RingVerdict::RingModule(certs) => {
                obj.insert("path".into(), json!("module"));
                obj.insert("certificates".into(), to_value(certs));
            }
            RingVerdict::Unknown {
                degree_bound,
                unresolved,
                reason,
            } => {
                obj.insert(
                    "path".into(),
                    json!(if ctx.angles.len() == 3 { "lattice" } else { "module" }),
                );
                obj.insert("certificates".into(), json!([]));
                obj.insert("degree_bound".into(), json!(degree_bound));
                obj.insert("unresolved".into(), json!(unresolved));
                obj.insert("reason".into(), json!(reason));
            }
        }
        Ok(out)
    }

    pub fn witness(&self, angles: &AngleSet, w: &DensityWitness) -> Result<Value, ScalarError> {
        let [re_lo, re_hi, im_lo, im_hi] = format_interval(&w.value_interval);
        Ok(json!({
            "p": { "expr": w.p.expr, "value": self.scalar(&w.p.value)? },
            "z": { "monomial": Self::pair(angles, w.z_pair), "value": self.scalar(&w.z)? },
            "a": w.a.to_string(),
            "b": w.b.to_string(),
            "N1": w.n1,
            "N2": w.n2,
            "value": w.value.to_string(),
            "value_interval": { "re": [re_lo, re_hi], "im": [im_lo, im_hi] },
            "target": [w.target.0.to_string(), w.target.1.to_string()],
            "epsilon": w.epsilon.to_string(),
        }))
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}
