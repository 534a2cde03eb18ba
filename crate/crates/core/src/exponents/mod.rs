//! Exact exponent calculus in (l, q, M, N, C, L), parameterized by θ.
//!
//! Every quantity is an arbitrary-precision rational. Values quoted in the
//! literature are stored next to the re-derived ones; a mismatch is reported,
//! never silently corrected.

mod monomial;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use monomial::{rat, Monomial, Symbol, Q};

use crate::error::{Error, Result};

/// Opaque exponent of the (1+|μ|)^B factor; never evaluated.
pub const MU_EXPONENT_TAG: &str = "B";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaValue {
    pub value: Q,
    pub provenance: String,
}

impl ThetaValue {
    pub fn new(value: Q, provenance: impl Into<String>) -> Result<Self> {
        if value.is_negative() || value > rat(1, 4) {
            return Err(Error::InvalidArgument(format!("theta {value} outside [0, 1/4]")));
        }
        Ok(ThetaValue { value, provenance: provenance.into() })
    }

    /// θ = 7/64 from λ₁ ≥ 975/4096.
    pub fn kim_sarnak() -> Self {
        ThetaValue { value: rat(7, 64), provenance: "Kim-Sarnak 2003".into() }
    }

    pub fn conjectural() -> Self {
        ThetaValue { value: Q::zero(), provenance: "Selberg conjecture".into() }
    }

    /// Parses "7/64", "0", or a λ₁ given as "lambda:975/4096".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("lambda:") {
            return theta_from_lambda(&parse_rational(rest)?);
        }
        Self::new(parse_rational(s)?, "user")
    }
}

impl fmt::Display for ThetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.provenance)
    }
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// Exact square root of a non-negative rational, if it is a square.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Q::new(rn, rd))
}

/// θ = √(max(0, 1/4 − λ₁)), exact.
pub fn theta_from_lambda(lambda1: &Q) -> Result<ThetaValue> {
    if lambda1.is_negative() {
        return Err(Error::InvalidArgument(format!("lambda1 = {lambda1} is negative")));
    }
    let disc = rat(1, 4) - lambda1;
    if !disc.is_positive() {
        return Ok(ThetaValue { value: Q::zero(), provenance: format!("lambda1 >= {lambda1}") });
    }
    match rational_sqrt(&disc) {
        Some(t) => Ok(ThetaValue { value: t, provenance: format!("lambda1 >= {lambda1}") }),
        None => Err(Error::NonSquareDiscriminant(format!("1/4 - {lambda1} = {disc}"))),
    }
}

/// Best rational approximation to √x with denominator ≤ max_den, in integer arithmetic.
pub fn rational_sqrt_approx(x: &Q, max_den: u64) -> Q {
    if let Some(r) = rational_sqrt(x) {
        return r;
    }
    let scale = BigInt::from(10u64).pow(24);
    let target = Q::new((x.numer() * x.denom() * &scale * &scale).sqrt(), x.denom() * &scale);
    best_approximation(&target, &BigInt::from(max_den))
}

fn best_approximation(x: &Q, max_den: &BigInt) -> Q {
    // Continued-fraction convergents, then the best semiconvergent.
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut r = x.clone();
    loop {
        let a = r.floor().to_integer();
        let q2 = &a * &q1 + &q0;
        if &q2 > max_den {
            let k = (max_den - &q0) / &q1;
            let semi = Q::new(&k * &p1 + &p0, &k * &q1 + &q0);
            let conv = Q::new(p1.clone(), q1.clone());
            return if (&semi - x).abs() < (&conv - x).abs() { semi } else { conv };
        }
        let p2 = &a * &p1 + &p0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = &r - Q::from_integer(a);
        if frac.is_zero() {
            return Q::new(p1, q1);
        }
        r = frac.recip();
    }
}

fn one() -> Q {
    Q::one()
}

/// 8 − 8θ, the recurring denominator.
fn d8(t: &Q) -> Q {
    rat(8, 1) - rat(8, 1) * t
}

/// Lemma 1 bound l^{1/2} (√(MN)/C)^{1−2θ}.
pub fn lemma1_bound(theta: &ThetaValue) -> Monomial {
    let t = &theta.value;
    let inner = Monomial::from_pairs(&[
        (Symbol::M, rat(1, 2)),
        (Symbol::N, rat(1, 2)),
        (Symbol::C, -one()),
    ]);
    &Monomial::var(Symbol::L, rat(1, 2)) * &inner.pow(&(one() - rat(2, 1) * t))
}

/// Lemma 2/3 bound l^{1/2} MN/(qC), with (ae)^{1/2} ≤ l^{1/2}.
pub fn lemma23_bound() -> Monomial {
    Monomial::from_pairs(&[
        (Symbol::L, rat(1, 2)),
        (Symbol::M, one()),
        (Symbol::N, one()),
        (Symbol::Q, -one()),
        (Symbol::C, -one()),
    ])
}

/// Right-hand side of the cutoff balance, l^{3/4} N^{1/4} M^{−1/2} C/q.
pub fn balance_rhs() -> Monomial {
    Monomial::from_pairs(&[
        (Symbol::L, rat(3, 4)),
        (Symbol::N, rat(1, 4)),
        (Symbol::M, rat(-1, 2)),
        (Symbol::C, one()),
        (Symbol::Q, -one()),
    ])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceCutoff {
    pub theta: Q,
    /// l^{−1/(8−8θ)} q^{1/(2−2θ)} √M N^{(1−4θ)/(8−8θ)}.
    pub branch1: Monomial,
    /// l^{−1/(8−8θ)} q^{(9−8θ)/(8−8θ)}.
    pub branch2: Monomial,
    /// branch1 at M = N = q equals branch2.
    pub branches_agree: bool,
    /// branch1 equals the closed form.
    pub closed_form_agrees: bool,
}

pub fn balance_cutoff(theta: &ThetaValue) -> Result<BalanceCutoff> {
    let t = &theta.value;
    let lhs = lemma1_bound(theta);
    let branch1 = lhs
        .solve_for(&balance_rhs(), Symbol::C)
        .ok_or_else(|| Error::InvalidArgument("degenerate balance".into()))?;
    let d = d8(t);
    let closed = Monomial::from_pairs(&[
        (Symbol::L, -one() / &d),
        (Symbol::Q, one() / (rat(2, 1) - rat(2, 1) * t)),
        (Symbol::M, rat(1, 2)),
        (Symbol::N, (one() - rat(4, 1) * t) / &d),
    ]);
    let branch2 = Monomial::from_pairs(&[
        (Symbol::L, -one() / &d),
        (Symbol::Q, (rat(9, 1) - rat(8, 1) * t) / &d),
    ]);
    let q = Monomial::var(Symbol::Q, one());
    let at_diag = branch1.substitute(Symbol::M, &q).substitute(Symbol::N, &q);
    Ok(BalanceCutoff {
        theta: t.clone(),
        branches_agree: at_diag == branch2,
        closed_form_agrees: closed == branch1,
        branch1,
        branch2,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Errors {
    pub theta: Q,
    /// The three error monomials in (l, q), as displayed.
    pub terms: [Monomial; 3],
    /// Terms 1 and 3 re-derived from the lemma bounds at branch-2 C, M = N = q.
    pub rederived: [Monomial; 2],
    pub identities_hold: bool,
}

impl Theorem1Errors {
    /// q-exponents at l = 1.
    pub fn q_exponents(&self) -> [Q; 3] {
        std::array::from_fn(|i| self.terms[i].exponent(Symbol::Q).clone())
    }

    pub fn max_q_exponent(&self) -> Q {
        self.q_exponents().into_iter().max().expect("three terms")
    }
}

pub fn theorem1_error_exponents(theta: &ThetaValue) -> Result<Theorem1Errors> {
    let t = &theta.value;
    let d = d8(t);
    let stated = [
        Monomial::from_pairs(&[
            (Symbol::L, (rat(5, 1) - rat(6, 1) * t) / &d),
            (Symbol::Q, -(one() - rat(2, 1) * t) / &d),
        ]),
        Monomial::from_pairs(&[(Symbol::L, rat(17, 8)), (Symbol::Q, rat(-1, 4))]),
        Monomial::from_pairs(&[
            (Symbol::L, (rat(5, 1) - rat(4, 1) * t) / &d),
            (Symbol::Q, -one() / &d),
        ]),
    ];
    let cut = balance_cutoff(theta)?;
    let q = Monomial::var(Symbol::Q, one());
    let specialize = |m: &Monomial| {
        m.substitute(Symbol::C, &cut.branch2)
            .substitute(Symbol::M, &q)
            .substitute(Symbol::N, &q)
    };
    let rederived = [specialize(&lemma1_bound(theta)), specialize(&lemma23_bound())];
    let identities_hold = rederived[0] == stated[0] && rederived[1] == stated[2];
    Ok(Theorem1Errors { theta: t.clone(), terms: stated, rederived, identities_hold })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubconvexityDelta {
    pub theta: Q,
    pub delta: Q,
    /// L = q^{length_exponent}.
    pub length_exponent: Q,
    /// The balance solved symbolically agrees with the closed forms.
    pub rederivation_agrees: bool,
}

/// δ = (1−2θ)/(16(7−8θ)) and the amplifier length exponent (1−2θ)/(2(7−8θ)).
pub fn subconvexity_delta(theta: &ThetaValue) -> Result<SubconvexityDelta> {
    let t = &theta.value;
    if *t >= rat(7, 8) {
        return Err(Error::InvalidArgument(format!("theta {t} >= 7/8")));
    }
    let e = (one() - rat(2, 1) * t) / (rat(2, 1) * (rat(7, 1) - rat(8, 1) * t));
    let delta = &e / rat(8, 1);

    // Diagonal L^{−1/2} against the first error term at l = L².
    let errs = theorem1_error_exponents(theta)?;
    let off = errs.terms[0].substitute(Symbol::L, &Monomial::var(Symbol::Amp, rat(2, 1)));
    let diag = Monomial::var(Symbol::Amp, rat(-1, 2));
    let solved = diag.solve_for(&off, Symbol::Amp);
    let rederivation_agrees = solved.as_ref().map(|m| m == &Monomial::var(Symbol::Q, e.clone())) == Some(true);
    Ok(SubconvexityDelta { theta: t.clone(), delta, length_exponent: e, rederivation_agrees })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MollifierLengths {
    pub theta: Q,
    /// (1−2θ)/(2(9−10θ)).
    pub delta1_formula: Q,
    /// Constraints from the three error terms with l ≤ q^{2Δ}.
    pub delta1_constraints: [Q; 3],
    pub delta1_min: Q,
    /// (1−2θ)/(4(7−8θ)).
    pub delta2: Q,
}

/// Largest Δ with l^{1/2}·(l^a q^b) < 1 for all l ≤ q^{2Δ}.
fn mollifier_constraint(term: &Monomial) -> Q {
    let a = term.exponent(Symbol::L) + rat(1, 2);
    -term.exponent(Symbol::Q) / (rat(2, 1) * a)
}

/// Largest exponent η with l^{1/2}·(l^a q^b) < 1 for all l < q^η.
fn dominance_threshold(term: &Monomial) -> Q {
    rat(2, 1) * mollifier_constraint(term)
}

pub fn mollifier_lengths(theta: &ThetaValue) -> Result<MollifierLengths> {
    let t = &theta.value;
    let two_t = rat(2, 1) * t;
    let errs = theorem1_error_exponents(theta)?;
    let delta1_constraints: [Q; 3] = std::array::from_fn(|i| mollifier_constraint(&errs.terms[i]));
    let delta1_min = delta1_constraints.iter().min().expect("three").clone();
    Ok(MollifierLengths {
        theta: t.clone(),
        delta1_formula: (one() - &two_t) / (rat(2, 1) * (rat(9, 1) - rat(10, 1) * t)),
        delta1_constraints,
        delta1_min,
        delta2: (one() - &two_t) / (rat(4, 1) * (rat(7, 1) - rat(8, 1) * t)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaThresholds {
    pub theta: Q,
    /// 1/(5−4θ).
    pub lemma_range: Q,
    /// 1/(12−11θ).
    pub amplifier_range: Q,
    /// η per error term such that the term is below l^{−1/2} for l < q^η.
    pub per_term: [Q; 3],
    pub per_term_min: Q,
}

pub fn lemma_thresholds(theta: &ThetaValue) -> Result<LemmaThresholds> {
    let t = &theta.value;
    let errs = theorem1_error_exponents(theta)?;
    let per_term: [Q; 3] = std::array::from_fn(|i| dominance_threshold(&errs.terms[i]));
    let per_term_min = per_term.iter().min().expect("three").clone();
    Ok(LemmaThresholds {
        theta: t.clone(),
        lemma_range: one() / (rat(5, 1) - rat(4, 1) * t),
        amplifier_range: one() / (rat(12, 1) - rat(11, 1) * t),
        per_term,
        per_term_min,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelbergRow {
    pub year: Option<u16>,
    pub source: &'static str,
    pub lambda1: Q,
    /// Strict inequality λ₁ > bound.
    pub strict: bool,
    pub theta: Q,
    pub exact: bool,
}

const SELBERG_BOUNDS: [(u16, &str, i64, i64, bool); 6] = [
    (1965, "Selberg", 3, 16, false),
    (1978, "Gelbart-Jacquet", 3, 16, true),
    (1995, "Luo-Rudnick-Sarnak", 171, 784, true),
    (1996, "Iwaniec", 10, 49, true),
    (2002, "Kim-Shahidi", 66, 289, false),
    (2003, "Kim-Sarnak", 975, 4096, false),
];

fn selberg_row(year: Option<u16>, source: &'static str, lambda1: Q, strict: bool) -> SelbergRow {
    let disc = rat(1, 4) - &lambda1;
    let (theta, exact) = if !disc.is_positive() {
        (Q::zero(), true)
    } else {
        match rational_sqrt(&disc) {
            Some(t) => (t, true),
            None => (rational_sqrt_approx(&disc, 1_000_000), false),
        }
    };
    SelbergRow { year, source, lambda1, strict, theta, exact }
}

/// The six historical lower bounds for λ₁.
pub fn selberg_table() -> Vec<SelbergRow> {
    SELBERG_BOUNDS
        .iter()
        .map(|&(y, s, n, d, strict)| selberg_row(Some(y), s, rat(n, d), strict))
        .collect()
}

/// λ₁ ≥ 1/4.
pub fn selberg_conjecture() -> SelbergRow {
    selberg_row(None, "conjecture", rat(1, 4), false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub quantity: &'static str,
    pub derived: Q,
    pub stated: Q,
    pub note: &'static str,
}

impl Discrepancy {
    pub fn agrees(&self) -> bool {
        self.derived == self.stated
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentReport {
    pub theta: ThetaValue,
    pub cutoff: BalanceCutoff,
    pub errors: Theorem1Errors,
    pub delta: SubconvexityDelta,
    pub mollifier: MollifierLengths,
    pub thresholds: LemmaThresholds,
    pub discrepancies: Vec<Discrepancy>,
}

impl ExponentReport {
    /// Internally checkable identities; all must hold.
    pub fn identities_hold(&self) -> bool {
        self.cutoff.branches_agree
            && self.cutoff.closed_form_agrees
            && self.errors.identities_hold
            && self.delta.rederivation_agrees
    }

    pub fn flagged(&self) -> impl Iterator<Item = &Discrepancy> {
        self.discrepancies.iter().filter(|d| !d.agrees())
    }
}

/// Values quoted for θ = 7/64 alongside their recomputation.
fn stated_values(theta: &Q, m: &MollifierLengths, th: &LemmaThresholds, d: &SubconvexityDelta, e: &Theorem1Errors) -> Vec<Discrepancy> {
    let mut out = vec![
        Discrepancy {
            quantity: "delta1 formula vs min of error constraints",
            derived: m.delta1_min.clone(),
            stated: m.delta1_formula.clone(),
            note: "the q^{21D/4} term binds before the stated formula",
        },
        Discrepancy {
            quantity: "amplifier range vs per-term dominance minimum",
            derived: th.per_term_min.clone(),
            stated: th.amplifier_range.clone(),
            note: "1/(12-11θ) is not the minimum of the per-term thresholds",
        },
    ];
    if *theta == rat(7, 64) {
        out.push(Discrepancy {
            quantity: "delta1 at theta=7/64",
            derived: m.delta1_formula.clone(),
            stated: rat(25, 566),
            note: "exact evaluation of (1-2θ)/(2(9-10θ)) gives 25/506",
        });
        out.push(Discrepancy { quantity: "delta2 at theta=7/64", derived: m.delta2.clone(), stated: rat(25, 784), note: "" });
        out.push(Discrepancy { quantity: "delta at theta=7/64", derived: d.delta.clone(), stated: rat(25, 3136), note: "" });
        out.push(Discrepancy {
            quantity: "error exponent at theta=7/64",
            derived: -e.max_q_exponent(),
            stated: rat(25, 228),
            note: "",
        });
    }
    out
}

pub fn exponent_report(theta: &ThetaValue) -> Result<ExponentReport> {
    let cutoff = balance_cutoff(theta)?;
    let errors = theorem1_error_exponents(theta)?;
    let delta = subconvexity_delta(theta)?;
    let mollifier = mollifier_lengths(theta)?;
    let thresholds = lemma_thresholds(theta)?;
    let discrepancies = stated_values(&theta.value, &mollifier, &thresholds, &delta, &errors);
    Ok(ExponentReport { theta: theta.clone(), cutoff, errors, delta, mollifier, thresholds, discrepancies })
}

/// Decimal rendering of an exact rational, for display only.
pub fn decimal(x: &Q, digits: usize) -> String {
    let neg = x.is_negative();
    let x = x.abs();
    let scale = BigInt::from(10u64).pow(digits as u32);
    let scaled = ((x * Q::from_integer(scale.clone())) + rat(1, 2)).floor().to_integer();
    let int = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{frac:0>digits$}")
}
