//! Every exact check available for a single `n`, collected into one report.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::fansy::{compare_fansy, edge_endpoints, fansy_closed_form, fansy_via_recipe};
use super::local::local_chart_check;
use super::plucker::{all_deltas, big_e, plucker_pairs, positive_fiber_b, sigma_oracle, small_e, GrassmannianSetup};
use super::{
    chart_cone_via_weyl, ell, grassmannian_simple_roots, length, longest_coset_rep, shuffles,
    tail_cone_chart, tail_fan_grass, tail_fan_via_shuffles, DEFAULT_MAX_WEYL_ORDER, LAMBDA,
};
use crate::arith::{int, rat, to_rats, Int, Rat};
use crate::chow::N_TILDE;
use crate::divisor::{check_subdivision_structure, DivisorLabel, Partition};
use crate::error::{Error, Result};
use crate::lattice::RatMatrix;
use crate::polyhedral::{induced_subdivision, Halfspace, Polyhedron};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Battery {
    pub n: usize,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Battery {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "pass": self.pass,
            "checks": self.checks.iter().map(|c| json!({
                "check": c.name,
                "pass": c.pass,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `Ok(Err(msg))` is a failed check; `Err` is a usage error and aborts the battery.
type Step = Result<std::result::Result<String, String>>;

fn fail(msg: impl Into<String>) -> Step {
    Ok(Err(msg.into()))
}

fn check(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Guard and argument errors abort; anything else counts as a failed check.
fn absorb<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(x) => Ok(Ok(x)),
        Err(e @ (Error::GuardExceeded { .. } | Error::InvalidArgument(_))) => Err(e),
        Err(e) => Ok(Err(e.to_string())),
    }
}

macro_rules! try_step {
    ($e:expr) => {
        match absorb($e)? {
            Ok(x) => x,
            Err(m) => return fail(m),
        }
    };
}

macro_rules! ensure {
    ($cond:expr, $msg:expr) => {
        if let Err(m) = check($cond, $msg) {
            return fail(m);
        }
    };
}

fn equality(n: usize, max_n: usize) -> Step {
    let closed = try_step!(fansy_closed_form(n));
    let recipe = try_step!(fansy_via_recipe(n, max_n));
    let cmp = compare_fansy(&closed, &recipe);
    ensure!(cmp.equal, format!("unmatched cells {:?} / {:?}", cmp.unmatched_left, cmp.unmatched_right));
    let labels = (1usize << (n - 1)) - n - 1;
    ensure!(recipe.labels().len() == labels, "label count");
    let report = check_subdivision_structure(&recipe);
    ensure!(report.pass, "recipe output fails the subdivision checks");
    for b in Partition::all(n) {
        let label = DivisorLabel::Partition(b.clone());
        let sub = recipe.subdivision(&label);
        ensure!(sub.cells().len() == binom(n, 2), format!("cell count in S_{b}"));
        let mut got: Vec<Vec<Rat>> = sub
            .cells()
            .iter()
            .flat_map(|c| c.polyhedron.vertices().to_vec())
            .collect();
        got.sort();
        got.dedup();
        let (hi, lo) = edge_endpoints(n, &b);
        let mut expect = vec![hi, lo];
        expect.sort();
        ensure!(got == expect, format!("edge endpoints in S_{b}"));
    }
    Ok(Ok(format!("equal; {labels} labels, {} cells per S_B", binom(n, 2))))
}

fn fibers(n: usize) -> Step {
    let gs = try_step!(GrassmannianSetup::new(n));
    for b in gs.partitions() {
        try_step!(positive_fiber_b(&b, &gs));
    }
    let deltas = try_step!(all_deltas(&gs));
    Ok(Ok(format!("{} partitions, three routes each", deltas.len())))
}

fn induced(n: usize) -> Step {
    let pairs = plucker_pairs(n);
    // the hypersimplex lies in Σx = 2, so the last coordinate is dropped
    let points: Vec<Vec<Rat>> = pairs
        .iter()
        .map(|&(i, j)| {
            let mut v = vec![Rat::zero(); n - 1];
            for k in [i, j] {
                if k < n {
                    v[k - 1] += Rat::one();
                }
            }
            v
        })
        .collect();
    for b in Partition::all(n) {
        let s = try_step!(induced_subdivision("Q", &points, &to_rats(&big_e(n, b.first()))));
        ensure!(s.is_valid(), format!("invalid subdivision for {b}"));
        let cell = |block: &[usize]| {
            let idx: Vec<String> = pairs
                .iter()
                .enumerate()
                .filter(|(_, (i, j))| block.contains(i) || block.contains(j))
                .map(|(k, _)| k.to_string())
                .collect();
            format!("{{{}}}", idx.join(","))
        };
        let mut expect = vec![cell(b.first()), cell(&b.second())];
        expect.sort();
        let mut got: Vec<String> = s.cells().iter().map(|c| c.label.clone()).collect();
        got.sort();
        ensure!(got == expect, format!("cells for {b}: {got:?}"));
    }
    Ok(Ok("two cells per partition".into()))
}

fn crosscut(n: usize) -> Step {
    let sigma = try_step!(sigma_oracle(n));
    let height = try_step!(Polyhedron::from_hrep(
        N_TILDE,
        n,
        &[],
        &[Halfspace::new(vec![Int::one(); n], Rat::one())],
    ));
    let cut = try_step!(sigma.intersect(&height));
    let mut expect = Vec::new();
    for i in 1..=n {
        let ei = to_rats(&small_e(n, &[i]));
        expect.push(ei.iter().map(|x| rat(1, 2) - x).collect::<Vec<_>>());
        expect.push(ei);
    }
    expect.sort();
    ensure!(cut.vertices() == expect.as_slice(), "crosscut vertices");
    Ok(Ok("8 vertices".into()))
}

fn tail_fan(n: usize) -> Step {
    let fan = try_step!(tail_fan_grass(2, n));
    ensure!(fan.len() == binom(n, 2), "cone count");
    ensure!(fan.cones().iter().all(|c| c.polyhedron.is_pointed()), "non-pointed cone");
    ensure!(fan.is_fan() && fan.is_complete(), "not a complete fan");
    ensure!(fan == try_step!(tail_fan_via_shuffles(2, n, DEFAULT_MAX_WEYL_ORDER)), "shuffle route differs");
    let simple = grassmannian_simple_roots(2, n);
    let chart = try_step!(tail_cone_chart(&simple, n, DEFAULT_MAX_WEYL_ORDER));
    ensure!(chart == try_step!(chart_cone_via_weyl(&simple, n)), "chart cone differs from the dual cone");
    let gens: Vec<Vec<Int>> = (1..=n)
        .map(|m| {
            let v = ell(n, &[m]);
            if m <= 2 { v } else { v.into_iter().map(|x| -x).collect() }
        })
        .collect();
    ensure!(chart == try_step!(Polyhedron::cone(LAMBDA, n - 1, &gens, &[])), "chart cone generators");
    Ok(Ok(format!("{} pointed cones, complete", fan.len())))
}

fn weyl(n: usize) -> Step {
    for k in 1..=3usize.min(n - 1) {
        ensure!(try_step!(shuffles(k, n)).len() == binom(n, k), "shuffle count");
        let w = try_step!(longest_coset_rep(k, n));
        // (1 2 ... n)^{-k} sends i to i-k mod n
        let expect: Vec<usize> = (1..=n).map(|i| (i + n - 1 - k % n) % n + 1).collect();
        ensure!(w == expect, format!("w^I for k={k}"));
        ensure!(length(&w) == k * (n - k), format!("length for k={k}"));
    }
    Ok(Ok("k = 1..3".into()))
}

fn identities(n: usize) -> Step {
    let gs = try_step!(GrassmannianSetup::new(n));
    let td = try_step!(gs.t.mul(&gs.setup.deg_star.matrix.to_rat()));
    ensure!(td == RatMatrix::identity(n), "t∘deg* is not the identity");
    for b in Partition::all(n) {
        let lhs: Vec<Int> = try_step!(gs.setup.deg_star.apply(&small_e(n, b.first())))
            .into_iter()
            .zip(try_step!(gs.setup.deg_star.apply(&small_e(n, &b.second()))))
            .map(|(x, y)| x - y)
            .collect();
        let rhs: Vec<Int> = big_e(n, b.first())
            .into_iter()
            .zip(big_e(n, &b.second()))
            .map(|(x, y)| int(2) * (x - y))
            .collect();
        ensure!(lhs == rhs, format!("deg* identity for {b}"));
    }
    let k = gs.setup.quotient_rank();
    for s in [&gs.setup.section, &gs.integral_setup.section] {
        let ps = try_step!(gs.setup.pi.matrix.to_rat().mul(s));
        ensure!(ps == RatMatrix::identity(k), "π∘s is not the identity");
    }
    Ok(Ok("t∘deg*, deg*(e^B' - e^B''), π∘s".into()))
}

fn local(n: usize) -> Step {
    let r = try_step!(local_chart_check(n));
    ensure!(r.pass, format!("{:?}", r.failures()));
    Ok(Ok(format!("{} diagram checks", r.checks.len())))
}

/// Runs the Gr(2,n) checks for one `n`. The cube crosscut applies only at `n = 4`.
pub fn verify_battery(n: usize, max_n: usize) -> Result<Battery> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("need n >= 4, got {n}")));
    }
    let mut steps: Vec<(&str, fn(usize) -> Step)> = vec![
        ("positive fibers and Δ_B", fibers),
        ("induced subdivisions", induced),
        ("tail fan", tail_fan),
        ("Weyl identities", weyl),
        ("algebraic identities", identities),
        ("local chart diagram", local),
    ];
    if n == 4 {
        steps.push(("cube crosscut", crosscut));
    }
    let mut checks = Vec::with_capacity(steps.len() + 1);
    let mut push = |name: &str, r: std::result::Result<String, String>| {
        let (pass, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        checks.push(Check { name: name.into(), pass, detail });
    };
    push("closed form equals recipe", equality(n, max_n)?);
    for (name, f) in steps {
        push(name, f(n)?);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(Battery { n, pass, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmannian::DEFAULT_MAX_N;

    #[test]
    fn battery_n4() {
        let b = verify_battery(4, DEFAULT_MAX_N).unwrap();
        assert!(b.pass, "{:?}", b.failures());
        assert_eq!(b.checks.len(), 8);
    }

    #[test]
    fn guard_aborts() {
        assert!(matches!(verify_battery(7, DEFAULT_MAX_N), Err(Error::GuardExceeded { .. })));
        assert!(verify_battery(3, DEFAULT_MAX_N).is_err());
    }
}
