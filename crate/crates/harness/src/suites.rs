//! Verification suites run by `addcomb verify`.

use std::fmt;
use std::str::FromStr;

use addcomb::connectivity::{
    check_connected, check_strong_implies_weak, konyagin_containment, partition_min_sigma, ConnectivityParams,
    PartitionOptions,
};
use addcomb::dissociation::{check_rudin, Caps, DissociatedSet};
use addcomb::energy::check_holder;
use addcomb::scalar::{big, pow};
use addcomb::{energy, Error, GroupSet, GroupSpec, IntFn, RationalConstant, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::generate::{generate, Family, GeneratorSpec};
use crate::oracle::energy_by_histogram;
use crate::pipeline::{run_main_pipeline, PipelineOptions};
use crate::report::{recheck, to_value};

const MAX_LISTED_FAILURES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    OracleEquivalence,
    Hoelder,
    Rudin,
    SubspaceConnectivity,
    StrongImpliesWeak,
    PartitionProperties,
    Konyagin,
    PipelineSmoke,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::OracleEquivalence,
        Suite::Hoelder,
        Suite::Rudin,
        Suite::SubspaceConnectivity,
        Suite::StrongImpliesWeak,
        Suite::PartitionProperties,
        Suite::Konyagin,
        Suite::PipelineSmoke,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleEquivalence => "oracle-equivalence",
            Suite::Hoelder => "hoelder",
            Suite::Rudin => "rudin",
            Suite::SubspaceConnectivity => "subspace-connectivity",
            Suite::StrongImpliesWeak => "strong-implies-weak",
            Suite::PartitionProperties => "partition-properties",
            Suite::Konyagin => "konyagin",
            Suite::PipelineSmoke => "pipeline-smoke",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub cases: u64,
    pub violations: u64,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct Tally {
    suite: Suite,
    cases: u64,
    violations: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new(suite: Suite) -> Self {
        Tally { suite, cases: 0, violations: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.failures.len() < MAX_LISTED_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn done(self) -> SuiteResult {
        SuiteResult { suite: self.suite, cases: self.cases, violations: self.violations, failures: self.failures }
    }
}

fn random_set(spec: &GroupSpec, size: usize, range: Option<u64>, rng: &mut ChaCha8Rng) -> Result<GroupSet> {
    generate(&GeneratorSpec::new(Family::Random { size, range }, spec.clone(), rng.gen()))
}

fn rc(p: u64, q: u64) -> RationalConstant {
    RationalConstant::new(p, q).expect("nonzero denominator")
}

/// Runs the named suites in parallel; the result order follows `scope`.
pub fn verify_suite(scope: &[Suite], seed: u64) -> Result<Vec<SuiteResult>> {
    scope.par_iter().map(|&s| run_suite(s, seed)).collect()
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut t = Tally::new(suite);
    match suite {
        Suite::OracleEquivalence => {
            let groups = [GroupSpec::cyclic(16)?, GroupSpec::vector(2, 3)?, GroupSpec::integers()];
            for spec in &groups {
                let n = spec.order_u64().unwrap_or(16).min(16) as usize;
                for _ in 0..100 {
                    let size = rng.gen_range(1..=8.min(n));
                    let a = random_set(spec, size, Some(16), &mut rng)?;
                    for k in 2..=4 {
                        let got = energy(&a, k)?.value;
                        let want = energy_by_histogram(&a, k);
                        t.check(got == want, || format!("T_{k}({a}) = {got}, oracle {want}"));
                    }
                }
            }
        }
        Suite::Hoelder => {
            for _ in 0..1000 {
                let spec = GroupSpec::cyclic(rng.gen_range(2..=32))?;
                let k1 = *[2usize, 4].choose(&mut rng).unwrap();
                let k2 = *[2usize, 4].choose(&mut rng).unwrap();
                let n = spec.order_u64().unwrap() as usize;
                let func = |rng: &mut ChaCha8Rng| -> Result<IntFn> {
                    let size = rng.gen_range(1..=n.min(8));
                    Ok(IntFn::indicator(&random_set(&spec, size, None, rng)?))
                };
                let fs = (0..k1).map(|_| func(&mut rng)).collect::<Result<Vec<_>>>()?;
                let gs = (0..k2).map(|_| func(&mut rng)).collect::<Result<Vec<_>>>()?;
                let v = check_holder(&fs, &gs, k1, k2)?;
                t.check(v.holds(), || format!("Hoelder fails for k1={k1}, k2={k2} on {spec}"));
            }
            for k in [2usize, 4] {
                let a = random_set(&GroupSpec::cyclic(29)?, 6, None, &mut rng)?;
                let f = IntFn::indicator(&a);
                let v = check_holder(&vec![f.clone(); k], &vec![f; k], k, k)?;
                t.check(v.holds() && v.equality, || format!("no equality for identical functions, k={k}"));
            }
        }
        Suite::Rudin => {
            for i in 0..200 {
                let size = 2 + i % 9;
                let spec = match i % 3 {
                    0 => GroupSpec::cyclic(1_000_003)?,
                    1 => GroupSpec::vector(2, size + 2)?,
                    _ => GroupSpec::integers(),
                };
                let l = generate(&GeneratorSpec::new(Family::Dissociated { size, range: None }, spec, rng.gen()))?;
                let ds = DissociatedSet::certify(l, Caps::default())?;
                for k in [2, 4] {
                    let q = check_rudin(&ds, k)?;
                    t.check(q.holds, || format!("Rudin fails for {} at k={k}", ds.base()));
                }
            }
        }
        Suite::SubspaceConnectivity => {
            for n in 1..=3 {
                let spec = GroupSpec::vector(2, n)?;
                for dim in 1..=n {
                    let p = generate(&GeneratorSpec::new(Family::Subspace { dim }, spec.clone(), rng.gen()))?;
                    for k in [2u32, 4] {
                        let t_p = energy(&p, k)?.value;
                        t.check(t_p == pow(&big(p.len()), 2 * k - 1), || format!("T_{k}({p}) != |P|^(2k-1)"));
                        let v = check_connected(&p, &ConnectivityParams::new(k, RationalConstant::one()))?;
                        t.check(v.holds, || format!("{p} not connected at C = 1, k = {k}"));
                    }
                }
            }
        }
        Suite::StrongImpliesWeak => {
            for _ in 0..200 {
                let spec = GroupSpec::cyclic(rng.gen_range(2..=64))?;
                let n = spec.order_u64().unwrap() as usize;
                let a = random_set(&spec, rng.gen_range(2..=n.min(10)), None, &mut rng)?;
                for c in [rc(1, 2), RationalConstant::one()] {
                    let r = check_strong_implies_weak(&a, &ConnectivityParams::new(2, c.clone()))?;
                    t.check(r.implication_holds, || format!("strong does not imply weak for {a} at C = {c}"));
                }
            }
        }
        Suite::PartitionProperties => {
            for i in 0..100 {
                let spec = if i % 2 == 0 { GroupSpec::cyclic(rng.gen_range(14..=64))? } else { GroupSpec::integers() };
                let size = rng.gen_range(1..=14);
                let a = random_set(&spec, size, Some(64), &mut rng)?;
                let eps = [rc(1, 4), rc(1, 2), RationalConstant::one()][i % 3].clone();
                let opts = PartitionOptions { seed: rng.gen(), ..Default::default() };
                let st = partition_min_sigma(&a, 2, &eps, &opts)?;
                t.check(st.ok() && st.certified(), || format!("partition properties fail for {a} at eps1 = {eps}"));
            }
        }
        Suite::Konyagin => {
            for _ in 0..200 {
                let spec = GroupSpec::cyclic(rng.gen_range(4..=40))?;
                let n = spec.order_u64().unwrap() as usize;
                let a = random_set(&spec, rng.gen_range(1..=n.min(8)), None, &mut rng)?;
                let c = [rc(1, 4), rc(1, 2), RationalConstant::one()].choose(&mut rng).unwrap().clone();
                let r = konyagin_containment(&a, 2, &c, 14)?;
                t.check(r.ok(), || format!("containment fails for strongly connected {a} at C = {c}"));
            }
        }
        Suite::PipelineSmoke => {
            let spec = GroupSpec::cyclic(1000)?;
            for _ in 0..5 {
                let a = random_set(&spec, rng.gen_range(2..=12), None, &mut rng)?;
                let opts = PipelineOptions { seed: rng.gen(), ..PipelineOptions::new(rc(1, 2)) };
                let r1 = run_main_pipeline(&a, &opts)?;
                let r2 = run_main_pipeline(&a, &opts)?;
                let (j1, j2) = (to_value(&r1.clone().into_report(&a)), to_value(&r2.into_report(&a)));
                t.check(j1 == j2, || format!("pipeline not deterministic on {a}"));
                let s = recheck(&j1)?;
                t.check(s.ok() && r1.passed(), || format!("pipeline recheck failed on {a}: {:?}", s.failures));
            }
        }
    }
    Ok(t.done())
}
