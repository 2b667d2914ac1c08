//! The structure-extraction pipeline: a connected subset, then an
//! almost-basis of it, then the span coverage of `A`.

use addcomb::connectivity::{
    extract_almost_basis, extract_connected_subset, AlmostBasis, AlmostBasisOutcome, ConnectivityParams, Extraction,
    Mode,
};
use addcomb::dissociation::{span_cover, Caps};
use addcomb::energy::doubling_energy_bound;
use addcomb::scalar::{big, log2_bounds, LOG_PRECISION};
use addcomb::{Error, GroupSet, Inequality, Power, RationalConstant, Relation, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use serde_json::json;

use crate::report::{input_digest, to_value, Report};

/// `ceil(e^(2^j))` for `j = 0..=5`: `floor(log2 ln m) >= j` iff `m >=` entry.
const LOG_LN_THRESHOLDS: [u64; 6] = [3, 8, 55, 2981, 8_886_111, 78_962_960_182_681];

/// `ln 2 >= 693147 / 10^6`.
const LN2_LOWER: (u32, u32) = (693_147, 1_000_000);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineOptions {
    pub epsilon: RationalConstant,
    pub mode: Mode,
    pub seed: u64,
    /// Cap on `k`; the derived order is clamped to it.
    pub max_order: u32,
    pub exhaustive_cap: usize,
    pub caps: Caps,
}

impl PipelineOptions {
    pub fn new(epsilon: RationalConstant) -> Self {
        PipelineOptions { epsilon, mode: Mode::Exact, seed: 0, max_order: 8, exhaustive_cap: 20, caps: Caps::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineParams {
    pub epsilon: RationalConstant,
    pub m: usize,
    pub beta1: RationalConstant,
    pub beta2: RationalConstant,
    pub c: RationalConstant,
    /// `floor(log2 ln m) + 1`, at least 1.
    pub p: u32,
    pub k: u32,
    pub k_unclamped: u64,
    pub max_order: u32,
    pub mode: Mode,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub input_digest: String,
    pub params: PipelineParams,
    /// `|A+A| / |A|`, the `K` the hypotheses are tested with.
    pub doubling: Option<RationalConstant>,
    pub extraction: Option<Extraction>,
    pub almost_basis: Option<AlmostBasis>,
    pub lambda: Option<GroupSet>,
    pub coverage: Option<usize>,
    pub hypotheses: Vec<Inequality>,
    pub hypotheses_hold: bool,
    /// Asserted only when every hypothesis holds.
    pub conclusions: Vec<Inequality>,
    pub certified: bool,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.conclusions.iter().all(Inequality::ok)
            && self.hypotheses.iter().all(Inequality::ok)
            && self.extraction.as_ref().is_none_or(Extraction::ok)
            && self.almost_basis.as_ref().is_none_or(AlmostBasis::ok)
    }

    pub fn into_report(self, input: &GroupSet) -> Report {
        let mut r = Report::new("pipeline", Some(input));
        r.certified = self.certified;
        r.passed = self.passed();
        r.params = to_value(&self.params);
        r.verdicts = json!({
            "doubling": self.doubling,
            "hypotheses": self.hypotheses,
            "hypotheses_hold": self.hypotheses_hold,
            "conclusions": self.conclusions,
        });
        r.witnesses = json!({ "lambda": self.lambda, "coverage": self.coverage });
        r.trace = json!({ "extraction": self.extraction, "almost_basis": self.almost_basis });
        r
    }
}

fn derive_p(m: usize) -> u32 {
    let j = LOG_LN_THRESHOLDS.iter().take_while(|&&t| m as u64 >= t).count() as u32;
    j.max(1)
}

fn rat(r: &RationalConstant) -> BigRational {
    r.as_ratio().clone()
}

pub fn pipeline_params(m: usize, opts: &PipelineOptions) -> Result<PipelineParams> {
    let eps = &opts.epsilon;
    if eps.is_zero() || *eps > RationalConstant::one() {
        return Err(Error::Config(format!("epsilon must lie in (0, 1], got {eps}")));
    }
    if opts.max_order < 2 || !opts.max_order.is_power_of_two() {
        return Err(Error::Config(format!("max order must be a power of two >= 2, got {}", opts.max_order)));
    }
    let p = derive_p(m);
    let k_unclamped = 1u64 << p;
    let k = k_unclamped.min(u64::from(opts.max_order)) as u32;
    let half = BigRational::new(1.into(), 2.into());
    let beta2 = if m < 2 {
        BigRational::one()
    } else {
        let (lo, _) = log2_bounds(&big(m), LOG_PRECISION);
        (&half + lo.recip()).min(BigRational::one())
    };
    Ok(PipelineParams {
        epsilon: eps.clone(),
        m,
        beta1: RationalConstant::from_ratio(half)?,
        beta2: RationalConstant::from_ratio(beta2)?,
        c: RationalConstant::from_ratio(rat(eps) / BigRational::from_integer(128.into()))?,
        p,
        k,
        k_unclamped,
        max_order: opts.max_order,
        mode: opts.mode,
        seed: opts.seed,
    })
}

/// Observed checks of the main-theorem hypotheses, with `K = |A+A|/|A|`.
fn hypotheses(m: usize, s: usize, t2: &BigUint, eps: &RationalConstant) -> Vec<Inequality> {
    let (p, q) = (eps.numer(), eps.denom());
    let pu = p.to_u32().unwrap_or(u32::MAX);
    let qu = q.to_u32().unwrap_or(u32::MAX);
    let (mb, sb) = (big(m), big(s));
    let (_, l_hi) = log2_bounds(&mb, LOG_PRECISION);
    let (ln, ld) = (l_hi.numer().to_biguint().unwrap(), l_hi.denom().to_biguint().unwrap());
    let e = 3 * qu + 2 * pu;
    vec![
        Inequality::from_terms(
            "eps <= 1/2",
            vec![Power::new(2u32, 1), Power::new(p.clone(), 1)],
            Relation::Le,
            vec![Power::new(q.clone(), 1)],
        ),
        Inequality::from_terms("|A| >= 2^(32/eps)", vec![Power::new(mb.clone(), pu)], Relation::Ge, vec![Power::new(2u32, 32 * qu)]),
        Inequality::from_terms(
            "T_2(A) >= |A|^3 / K",
            vec![Power::new(t2.clone(), 1), Power::new(sb.clone(), 1)],
            Relation::Ge,
            vec![Power::new(mb.clone(), 4)],
        ),
        Inequality::from_terms("K <= |A|^eps", vec![Power::new(sb.clone(), qu)], Relation::Le, vec![Power::new(mb.clone(), pu + qu)]),
        Inequality::from_terms(
            "K^(3/2+eps) <= 2^-58 eps^-4 |A| / log |A|",
            vec![Power::new(sb, e), Power::new(2u32, 58 * 2 * qu), Power::new(p, 8 * qu), Power::new(ln, 2 * qu)],
            Relation::Le,
            vec![Power::new(mb.clone(), e), Power::new(q, 8 * qu), Power::new(mb, 2 * qu), Power::new(ld, 2 * qu)],
        ),
    ]
    .into_iter()
    .map(Inequality::observed)
    .collect()
}

fn conclusions(m: usize, s: usize, lambda: usize, coverage: usize, eps: &RationalConstant, assert: bool) -> Vec<Inequality> {
    let (p, q) = (eps.numer(), eps.denom());
    let pu = p.to_u32().unwrap_or(u32::MAX);
    let qu = q.to_u32().unwrap_or(u32::MAX);
    let (mb, sb) = (big(m), big(s));
    let (l_lo, _) = log2_bounds(&mb, LOG_PRECISION);
    let (ln, ld) = (l_lo.numer().to_biguint().unwrap(), l_lo.denom().to_biguint().unwrap());
    vec![
        Inequality::from_terms(
            "|Span L ∩ A| >= |A| / (2 K^(1/2+eps))",
            vec![Power::new(big(2 * coverage), 2 * qu), Power::new(sb.clone(), qu + 2 * pu)],
            Relation::Ge,
            vec![Power::new(mb.clone(), 2 * qu), Power::new(mb.clone(), qu + 2 * pu)],
        )
        .asserted_if(assert),
        Inequality::from_terms(
            "|L| <= 2^30 eps^-2 K ln |A|",
            vec![
                Power::new(big(lambda), 1),
                Power::new(p, 2),
                Power::new(mb, 1),
                Power::new(ld, 1),
                Power::new(LN2_LOWER.1, 1),
            ],
            Relation::Le,
            vec![
                Power::new(2u32, 30),
                Power::new(q, 2),
                Power::new(sb, 1),
                Power::new(ln, 1),
                Power::new(LN2_LOWER.0, 1),
            ],
        )
        .asserted_if(assert),
    ]
}

pub fn run_main_pipeline(a: &GroupSet, opts: &PipelineOptions) -> Result<PipelineReport> {
    if a.is_empty() {
        return Err(Error::Domain("pipeline on the empty set".into()));
    }
    let m = a.len();
    let params = pipeline_params(m, opts)?;
    if m == 1 {
        return Ok(PipelineReport {
            input_digest: input_digest(a),
            params,
            doubling: None,
            extraction: None,
            almost_basis: None,
            lambda: Some(GroupSet::empty(a.spec().clone())),
            coverage: Some(1),
            hypotheses: Vec::new(),
            hypotheses_hold: false,
            conclusions: Vec::new(),
            certified: true,
        });
    }
    let cp = ConnectivityParams {
        k: params.k,
        c: params.c.clone(),
        beta1: params.beta1.clone(),
        beta2: params.beta2.clone(),
        mode: opts.mode,
        seed: opts.seed,
        exhaustive_cap: opts.exhaustive_cap,
        ..Default::default()
    };
    let extraction = extract_connected_subset(a, &cp).map_err(|e| stage("extraction", e))?;
    let basis = extract_almost_basis(&extraction.result, &cp, opts.caps).map_err(|e| stage("almost-basis", e))?;
    let (lambda, coverage) = match &basis.outcome {
        AlmostBasisOutcome::Basis { lambda, .. } => {
            let cover = span_cover(lambda.base(), a, opts.caps).map_err(|e| stage("coverage", e))?;
            (Some(lambda.base().clone()), cover.covered)
        }
        AlmostBasisOutcome::Certificate(_) => (None, None),
    };
    let dr = doubling_energy_bound(a).map_err(|e| stage("doubling", e))?;
    let hyps = hypotheses(m, dr.sumset_size, &dr.energy, &opts.epsilon);
    let hold = hyps.iter().all(|h| h.holds);
    let concl = conclusions(
        m,
        dr.sumset_size,
        lambda.as_ref().map_or(0, GroupSet::len),
        coverage.unwrap_or(0),
        &opts.epsilon,
        hold,
    );
    Ok(PipelineReport {
        input_digest: input_digest(a),
        params,
        doubling: Some(dr.doubling),
        certified: extraction.certified,
        extraction: Some(extraction),
        almost_basis: Some(basis),
        lambda,
        coverage,
        hypotheses: hyps,
        hypotheses_hold: hold,
        conclusions: concl,
    })
}

fn stage(name: &str, e: Error) -> Error {
    match e {
        Error::Capacity { what, got, cap } => Error::Capacity { what: format!("{name}: {what}"), got, cap },
        Error::Domain(s) => Error::Domain(format!("{name}: {s}")),
        Error::Config(s) => Error::Config(format!("{name}: {s}")),
        Error::UnsupportedSpec(s) => Error::UnsupportedSpec(format!("{name}: {s}")),
        Error::GuardTrip(s) => Error::GuardTrip(format!("{name}: {s}")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use addcomb::GroupSpec;

    fn half() -> RationalConstant {
        RationalConstant::new(1, 2).unwrap()
    }

    #[test]
    fn order_schedule() {
        let ks: Vec<(usize, u32)> = [2, 3, 7, 8, 54, 55, 2980, 2981].iter().map(|&m| (m, derive_p(m))).collect();
        assert_eq!(ks, vec![(2, 1), (3, 1), (7, 1), (8, 2), (54, 2), (55, 3), (2980, 3), (2981, 4)]);
        let p = pipeline_params(5000, &PipelineOptions::new(half())).unwrap();
        assert_eq!((p.k, p.k_unclamped), (8, 16));
        assert_eq!(p.c, RationalConstant::new(1, 256).unwrap());
        assert!(p.beta2 > p.beta1);
    }

    #[test]
    fn subspace_pipeline() {
        let v = GroupSpec::vector(2, 3).unwrap();
        let a = GroupSet::new(v.clone(), (0..8).map(|i| v.elem_at(i))).unwrap();
        let r = run_main_pipeline(&a, &PipelineOptions::new(half())).unwrap();
        assert_eq!(r.params.k, 4);
        assert_eq!(r.lambda.as_ref().unwrap().len(), 3);
        assert_eq!(r.coverage, Some(8));
        assert!(!r.hypotheses_hold && r.passed() && r.certified);
        // the quadruple hypothesis always holds with K = |A+A| / |A|
        assert!(r.hypotheses[2].holds);
        assert!(r.conclusions.iter().all(|c| c.holds));
    }

    #[test]
    fn singleton_short_circuit() {
        let a = GroupSet::from_i64s(GroupSpec::integers(), &[0]).unwrap();
        let r = run_main_pipeline(&a, &PipelineOptions::new(half())).unwrap();
        assert!(r.lambda.unwrap().is_empty());
        assert_eq!(r.coverage, Some(1));
    }
}
