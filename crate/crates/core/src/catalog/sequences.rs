//! Reductions among the sequence problems: `Conv -> Fin -> QPre -> Conv`.

use crate::error::{Error, Result};
use crate::instance::real::{inv_pow2, pow2, square_dyadic_partial, square_sum_cutoff};
use crate::instance::{Instance, PreRealInstance, RealTarget, Seq, SeqInstance, Tail, Value};
use crate::problems::{Catalog, ProblemRef};
use crate::reduction::Reduction;
use crate::stream::StreamHandle;
use crate::witness::Witness;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// `phi(x)(s) = [x(s+1) != x(s)]`; witnesses unchanged.
pub struct ConvToFin;

fn differences(word: &[u64]) -> Vec<u64> {
    (0..word.len())
        .map(|i| (word[(i + 1) % word.len()] != word[i]) as u64)
        .collect()
}

impl Reduction for ConvToFin {
    fn id(&self) -> String {
        "conv_to_fin".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::Conv.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::Fin.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        let x = d.expect_seq()?;
        let prefix = (0..x.tail_start()).map(|s| (x.at(s + 1) != x.at(s)) as u64).collect();
        let tail = match &x.tail {
            Tail::Const(_) => Tail::Const(0),
            Tail::Periodic(w) => Tail::Periodic(differences(w)),
            Tail::Ramp => Tail::Const(1),
        };
        Ok(Instance::Seq(Seq::new(prefix, tail)))
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        let values = (0..=len).map(|i| x.nat(i)).collect::<Result<Vec<_>>>()?;
        Ok(values.windows(2).map(|w| Value::bool(w[0] != w[1])).collect())
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(Witness::Nat(w.expect_nat("n")?))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(Witness::Nat(v.expect_nat("n")?))
    }
}

/// `phi(x) = sum over {n : x(n) != 0} of 2^-(n^2)`, named by its exact
/// partial sums.
pub struct FinToQPre;

impl Reduction for FinToQPre {
    fn id(&self) -> String {
        "fin_to_qpre".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::Fin.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::QPre.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        Ok(Instance::PreReal(PreRealInstance {
            target: RealTarget::SquareDyadicSum(d.expect_seq()?.clone()),
            approx: Default::default(),
        }))
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        let x = x.memoized();
        let mut out = Vec::new();
        for j in 0..len {
            let upto = square_sum_cutoff(j);
            let support = (0..=upto).map(|n| x.flag(n)).collect::<Result<Vec<_>>>()?;
            out.push(Value::Rat(square_dyadic_partial(|n| support[n as usize], upto)));
        }
        Ok(out)
    }

    /// `(2^{s^2}, sum over {n <= s : x(n) != 0} of 2^{s^2 - n^2})`.
    fn forward(&self, w: &Witness, x: &StreamHandle) -> Result<Witness> {
        let s = w.expect_nat("n")?;
        let mut num = BigInt::zero();
        for n in 0..=s {
            if x.flag(n)? {
                num += pow2(s * s - n * n);
            }
        }
        Ok(Witness::frac(pow2(s * s).to_biguint().expect("positive"), num))
    }

    /// `s + 1` for the largest `s` with `2^{s^2}` dividing the reduced
    /// denominator.
    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let q = v.expect_rational("k/m")?;
        let twos = q.denom().trailing_zeros().unwrap_or(0);
        let s = (0u64..).take_while(|s| s * s <= twos).last().unwrap_or(0);
        Ok(Witness::Nat(s + 1))
    }
}

/// Denominator prediction for `y = x / b`, `b = ceil(|q_0|) + 2`.
///
/// The prediction starts at 1. At stage `s` it moves from `n` to `n + 1`
/// when every `k/n` with `|k| <= n` is farther than `2^-s` from `q_s / b`;
/// `phi(x)(s)` is the prediction in force at stage `s`.
pub struct QPreToConv;

/// Stages simulated past the horizon before a description-level image
/// gives up.
const PREDICTION_CAP: u64 = 1 << 16;

fn scale_bound(q0: &BigRational) -> BigInt {
    q0.abs().ceil().to_integer() + 2
}

fn refuted(n: u64, y: &BigRational, s: u64) -> bool {
    let n_big = BigInt::from(n);
    let k = (y * BigRational::from_integer(n_big.clone())).round().to_integer();
    let k = k.clamp(-n_big.clone(), n_big.clone());
    (y - BigRational::new(k, n_big)).abs() > inv_pow2(s)
}

/// Runs the prediction, feeding approximations in order, until `stop`
/// holds for `(stage, prediction)`; returns the predictions at stages
/// `0..=stop_stage`.
fn predict(
    mut approx: impl FnMut(u64) -> Result<BigRational>,
    mut stop: impl FnMut(u64, u64) -> bool,
    cap: u64,
) -> Result<Vec<u64>> {
    let b = BigRational::from_integer(scale_bound(&approx(0)?));
    let mut n = 1;
    let mut out = Vec::new();
    for s in 0.. {
        out.push(n);
        if stop(s, n) {
            return Ok(out);
        }
        if s >= cap {
            return Err(Error::Unsupported(format!("denominator prediction unsettled after {cap} stages")));
        }
        if refuted(n, &(approx(s)? / &b), s) {
            n += 1;
        }
    }
    unreachable!()
}

/// Reduced denominator of `x / b`.
fn target_denominator(x: &BigRational, q0: &BigRational) -> Result<u64> {
    let y = x / BigRational::from_integer(scale_bound(q0));
    y.denom()
        .to_u64()
        .ok_or_else(|| Error::Unsupported("denominator exceeds 64 bits".into()))
}

impl Reduction for QPreToConv {
    fn id(&self) -> String {
        "qpre_to_conv".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::QPre.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::Conv.arc()
    }

    fn image(&self, d: &Instance, horizon: u64) -> Result<Instance> {
        let x = d.expect_pre_real()?;
        let approx = |j| Ok(x.approx_at(j));
        match x.exact_value() {
            Some(v) => {
                let den = target_denominator(&v, &x.approx_at(0))?;
                let mut prefix = predict(approx, |s, n| s + 1 >= horizon && n == den, horizon + PREDICTION_CAP)?;
                prefix.pop();
                Ok(Instance::Seq(SeqInstance::new(prefix, Tail::Const(den))))
            }
            None => {
                let prefix = predict(approx, |s, _| s + 1 >= horizon, horizon)?;
                Ok(Instance::Seq(SeqInstance::new(prefix, Tail::Ramp)))
            }
        }
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        let x = x.memoized();
        let out = predict(|j| x.rat(j), |s, _| s + 1 >= len, u64::MAX)?;
        Ok(out.into_iter().map(Value::Nat).collect())
    }

    /// The first stage whose prediction is the reduced denominator of
    /// `(k/m) / b`.
    fn forward(&self, w: &Witness, x: &StreamHandle) -> Result<Witness> {
        let v = w.expect_rational("k/m")?;
        let x = x.memoized();
        let den = target_denominator(&v, &x.rat(0)?)?;
        let out = predict(|j| x.rat(j), |_, n| n >= den, u64::MAX)?;
        Ok(Witness::Nat(out.len() as u64 - 1))
    }

    /// Reads the prediction `n` at stage `s`, then the numerator from an
    /// approximation finer than `1 / (2 n^2 b)`.
    fn backward(&self, v: &Witness, x: &StreamHandle) -> Result<Witness> {
        let s = v.expect_nat("n")?;
        let x = x.memoized();
        let n = *predict(|j| x.rat(j), |t, _| t >= s, u64::MAX)?.last().expect("nonempty");
        let b = scale_bound(&x.rat(0)?);
        let limit = BigInt::from(2u64) * BigInt::from(n) * BigInt::from(n) * &b;
        let a = (0u64..).find(|&a| pow2(a) > limit).expect("unbounded");
        let k = (x.rat(a)? / BigRational::from_integer(b.clone()) * BigRational::from_integer(BigInt::from(n)))
            .round()
            .to_integer();
        Ok(Witness::frac(BigUint::from(n), k * b))
    }
}

/// The predictions at stages `0..len` for a description.
pub fn predictions(x: &PreRealInstance, len: u64) -> Result<Vec<u64>> {
    if len == 0 {
        return Ok(Vec::new());
    }
    predict(|j| Ok(x.approx_at(j)), |s, _| s + 1 >= len, len)
}
