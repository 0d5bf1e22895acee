//! Signed Pauli strings, weighted Pauli sums and their exact Clifford conjugation.
//!
//! Phases live in the four-element group `{1, i, -1, -i}`; no floating point is
//! involved in string algebra. Conjugation follows the Heisenberg picture: the
//! image of `P` under a gate `U` is `U P U^dagger`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    X,
    Y,
    Z,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Product of two letters on the same qubit: `a * b = phase * letter`.
fn letter_product(a: Letter, b: Letter) -> (Phase, Option<Letter>) {
    use Letter::*;
    match (a, b) {
        (X, X) | (Y, Y) | (Z, Z) => (Phase::ONE, None),
        (X, Y) => (Phase::I, Some(Z)),
        (Y, X) => (Phase::MINUS_I, Some(Z)),
        (Y, Z) => (Phase::I, Some(X)),
        (Z, Y) => (Phase::MINUS_I, Some(X)),
        (Z, X) => (Phase::I, Some(Y)),
        (X, Z) => (Phase::MINUS_I, Some(Y)),
    }
}

/// `i^k` for `k` in `0..4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: i64) -> Phase {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn from_sign(negative: bool) -> Phase {
        if negative {
            Phase::MINUS_ONE
        } else {
            Phase::ONE
        }
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `+1` or `-1` for real phases, `None` otherwise.
    pub fn sign(self) -> Option<f64> {
        match self.0 {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.0 as usize])
    }
}

/// A signed multi-qubit Pauli word. Identity factors are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    phase: Phase,
    letters: BTreeMap<usize, Letter>,
    width: usize,
}

impl PauliString {
    pub fn identity(width: usize) -> Self {
        PauliString {
            phase: Phase::ONE,
            letters: BTreeMap::new(),
            width,
        }
    }

    pub fn single(width: usize, qubit: usize, letter: Letter) -> Result<Self> {
        Self::from_letters(width, [(qubit, letter)])
    }

    /// Builds a string from `(qubit, letter)` pairs. A qubit listed twice is an error.
    pub fn from_letters<I>(width: usize, letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Letter)>,
    {
        let mut map = BTreeMap::new();
        for (q, l) in letters {
            if q >= width {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
            if map.insert(q, l).is_some() {
                return Err(Error::InvalidQubitSet(format!("qubit {q} listed twice")));
            }
        }
        Ok(PauliString {
            phase: Phase::ONE,
            letters: map,
            width,
        })
    }

    /// Parses a dense label such as `"XIZY"` (character `k` acts on qubit `k`),
    /// optionally prefixed by `+`, `-`, `+i`, `-i` or `i`.
    pub fn from_label(label: &str) -> Result<Self> {
        let (phase, body) = if let Some(rest) = label.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = label.strip_prefix("+i") {
            (Phase::I, rest)
        } else if let Some(rest) = label.strip_prefix('i') {
            (Phase::I, rest)
        } else if let Some(rest) = label.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else if let Some(rest) = label.strip_prefix('+') {
            (Phase::ONE, rest)
        } else {
            (Phase::ONE, label)
        };
        let mut letters = Vec::new();
        for (q, c) in body.chars().enumerate() {
            let l = match c {
                'I' | '_' => continue,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("bad Pauli letter {other:?}"),
                    })
                }
            };
            letters.push((q, l));
        }
        Ok(PauliString::from_letters(body.chars().count(), letters)?.with_phase(phase))
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn letters(&self) -> &BTreeMap<usize, Letter> {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> Option<Letter> {
        self.letters.get(&qubit).copied()
    }

    /// Number of non-identity factors.
    pub fn locality(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.letters.keys().copied().collect()
    }

    /// Same letters with phase `+1`.
    pub fn unsigned(&self) -> PauliString {
        PauliString {
            phase: Phase::ONE,
            letters: self.letters.clone(),
            width: self.width,
        }
    }

    pub fn negate(&self) -> PauliString {
        let mut out = self.clone();
        out.phase = out.phase * Phase::MINUS_ONE;
        out
    }

    pub fn widen(&self, width: usize) -> Result<PauliString> {
        if let Some(&q) = self.letters.keys().next_back() {
            if q >= width {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
        }
        let mut out = self.clone();
        out.width = width;
        Ok(out)
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        let mut phase = self.phase * other.phase;
        let mut letters = self.letters.clone();
        for (&q, &b) in &other.letters {
            match letters.get(&q).copied() {
                None => {
                    letters.insert(q, b);
                }
                Some(a) => {
                    let (ph, l) = letter_product(a, b);
                    phase = phase * ph;
                    match l {
                        Some(l) => {
                            letters.insert(q, l);
                        }
                        None => {
                            letters.remove(&q);
                        }
                    }
                }
            }
        }
        Ok(PauliString {
            phase,
            letters,
            width: self.width,
        })
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .filter(|(q, a)| matches!(other.letters.get(q), Some(b) if b != *a))
            .count();
        anti % 2 == 0
    }

    /// Dense label of the letters, `I` for identity, qubit 0 first.
    pub fn label(&self) -> String {
        (0..self.width)
            .map(|q| self.letters.get(&q).map_or('I', |l| l.as_char()))
            .collect()
    }

    /// [`label`](Self::label) with the phase prefix, parseable by [`from_label`](Self::from_label).
    pub fn signed_label(&self) -> String {
        format!("{}{}", self.phase, self.label())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase)?;
        if self.letters.is_empty() {
            return f.write_str("I");
        }
        for (i, (q, l)) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", l.as_char(), q)?;
        }
        Ok(())
    }
}

/// The named single-qubit Clifford gates of the native instruction set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Clifford1 {
    H,
    S,
    Sdg,
    SqrtX,
    SqrtXdg,
    X,
    Y,
    Z,
}

impl Clifford1 {
    pub const ALL: [Clifford1; 8] = [
        Clifford1::H,
        Clifford1::S,
        Clifford1::Sdg,
        Clifford1::SqrtX,
        Clifford1::SqrtXdg,
        Clifford1::X,
        Clifford1::Y,
        Clifford1::Z,
    ];

    pub fn inverse(self) -> Clifford1 {
        match self {
            Clifford1::S => Clifford1::Sdg,
            Clifford1::Sdg => Clifford1::S,
            Clifford1::SqrtX => Clifford1::SqrtXdg,
            Clifford1::SqrtXdg => Clifford1::SqrtX,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Clifford1::H => "h",
            Clifford1::S => "s",
            Clifford1::Sdg => "sdg",
            Clifford1::SqrtX => "sx",
            Clifford1::SqrtXdg => "sxdg",
            Clifford1::X => "x",
            Clifford1::Y => "y",
            Clifford1::Z => "z",
        }
    }

    pub fn from_name(name: &str) -> Option<Clifford1> {
        Clifford1::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Images of `X` and `Z` as `(phase, letter)`.
    fn images(self) -> [(Phase, Letter); 2] {
        use Letter::*;
        let p = Phase::ONE;
        let m = Phase::MINUS_ONE;
        match self {
            Clifford1::H => [(p, Z), (p, X)],
            Clifford1::S => [(p, Y), (p, Z)],
            Clifford1::Sdg => [(m, Y), (p, Z)],
            Clifford1::SqrtX => [(p, X), (m, Y)],
            Clifford1::SqrtXdg => [(p, X), (p, Y)],
            Clifford1::X => [(p, X), (m, Z)],
            Clifford1::Y => [(m, X), (m, Z)],
            Clifford1::Z => [(m, X), (p, Z)],
        }
    }

    /// `U L U^dagger` for a single letter, as `(phase, letter)`.
    pub fn conjugate_letter(self, letter: Letter) -> (Phase, Letter) {
        let [x, z] = self.images();
        match letter {
            Letter::X => x,
            Letter::Z => z,
            Letter::Y => {
                // Y = i X Z
                let (ph, l) = letter_product(x.1, z.1);
                (
                    Phase::I * x.0 * z.0 * ph,
                    l.expect("Clifford images of X and Z anticommute"),
                )
            }
        }
    }
}

impl fmt::Display for Clifford1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Clifford gates accepted by [`conjugate_by_clifford`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliffordGate {
    One(Clifford1, usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MsAxis {
    XX,
    YY,
}

impl MsAxis {
    pub fn letter(self) -> Letter {
        match self {
            MsAxis::XX => Letter::X,
            MsAxis::YY => Letter::Y,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MsAxis::XX => "XX",
            MsAxis::YY => "YY",
        }
    }
}

/// Conjugates by a product of commuting per-letter images: `U P U^dagger = phase * prod_q U L_q U^dagger`.
fn conjugate_letterwise<F>(p: &PauliString, mut image: F) -> Result<PauliString>
where
    F: FnMut(usize, Letter) -> Result<PauliString>,
{
    let mut out = PauliString::identity(p.width).with_phase(p.phase);
    for (&q, &l) in &p.letters {
        out = out.multiply(&image(q, l)?)?;
    }
    Ok(out)
}

fn check_qubit(q: usize, width: usize) -> Result<()> {
    if q >= width {
        Err(Error::QubitOutOfRange { qubit: q, width })
    } else {
        Ok(())
    }
}

/// Heisenberg image `U p U^dagger` under a Clifford gate.
pub fn conjugate_by_clifford(p: &PauliString, gate: &CliffordGate) -> Result<PauliString> {
    let w = p.width;
    match *gate {
        CliffordGate::One(c, q) => {
            check_qubit(q, w)?;
            conjugate_letterwise(p, |k, l| {
                if k == q {
                    let (ph, l2) = c.conjugate_letter(l);
                    Ok(PauliString::single(w, k, l2)?.with_phase(ph))
                } else {
                    PauliString::single(w, k, l)
                }
            })
        }
        CliffordGate::Cnot { control, target } => {
            check_qubit(control, w)?;
            check_qubit(target, w)?;
            if control == target {
                return Err(Error::InvalidQubitSet("CNOT control equals target".into()));
            }
            two_qubit_conjugate(p, control, target, |a_is_first, l| match (a_is_first, l) {
                (true, Letter::X) => vec![(0, Letter::X), (1, Letter::X)],
                (true, Letter::Z) => vec![(0, Letter::Z)],
                (false, Letter::X) => vec![(1, Letter::X)],
                (false, Letter::Z) => vec![(0, Letter::Z), (1, Letter::Z)],
                _ => unreachable!(),
            })
        }
        CliffordGate::Cz(a, b) => {
            check_qubit(a, w)?;
            check_qubit(b, w)?;
            if a == b {
                return Err(Error::InvalidQubitSet("CZ on a single qubit".into()));
            }
            two_qubit_conjugate(p, a, b, |a_is_first, l| match (a_is_first, l) {
                (true, Letter::X) => vec![(0, Letter::X), (1, Letter::Z)],
                (true, Letter::Z) => vec![(0, Letter::Z)],
                (false, Letter::X) => vec![(0, Letter::Z), (1, Letter::X)],
                (false, Letter::Z) => vec![(1, Letter::Z)],
                _ => unreachable!(),
            })
        }
    }
}

/// `rule(is_first, letter)` gives the image of X or Z on the first/second qubit as
/// letters on positions 0 (first) and 1 (second); images carry no phase.
fn two_qubit_conjugate<F>(p: &PauliString, first: usize, second: usize, rule: F) -> Result<PauliString>
where
    F: Fn(bool, Letter) -> Vec<(usize, Letter)>,
{
    let w = p.width;
    let place = |is_first: bool, l: Letter| -> Result<PauliString> {
        let qs = [first, second];
        PauliString::from_letters(w, rule(is_first, l).into_iter().map(|(i, l)| (qs[i], l)))
    };
    conjugate_letterwise(p, |k, l| {
        if k != first && k != second {
            return PauliString::single(w, k, l);
        }
        let is_first = k == first;
        match l {
            Letter::X | Letter::Z => place(is_first, l),
            Letter::Y => {
                let x = place(is_first, Letter::X)?;
                let z = place(is_first, Letter::Z)?;
                Ok(x.multiply(&z)?.with_phase_mul(Phase::I))
            }
        }
    })
}

impl PauliString {
    fn with_phase_mul(mut self, ph: Phase) -> Self {
        self.phase = self.phase * ph;
        self
    }
}

/// Validates and sorts a targeted-MS qubit set.
pub fn normalize_qubit_set(qubits: &[usize], width: usize) -> Result<Vec<usize>> {
    if qubits.is_empty() {
        return Err(Error::InvalidQubitSet("empty MS qubit set".into()));
    }
    let mut set = qubits.to_vec();
    set.sort_unstable();
    if set.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidQubitSet(format!("duplicate qubit in {qubits:?}")));
    }
    if let Some(&q) = set.last() {
        check_qubit(q, width)?;
    }
    Ok(set)
}

/// Heisenberg image of `p` under the targeted MS Clifford `exp(-i pi/4 sum_{j<k} A_j A_k)`
/// on `qubits` (or its inverse).
///
/// A letter commuting with the axis letter is fixed. Otherwise it anticommutes with
/// every pair term touching its qubit, so the image is `L_q prod_{k != q} (+-i A_q A_k)`.
pub fn conjugate_by_ms(
    p: &PauliString,
    axis: MsAxis,
    qubits: &[usize],
    inverse: bool,
) -> Result<PauliString> {
    let w = p.width;
    let set = normalize_qubit_set(qubits, w)?;
    let a = axis.letter();
    let step = if inverse { Phase::MINUS_I } else { Phase::I };
    conjugate_letterwise(p, |q, l| {
        let single = PauliString::single(w, q, l)?;
        if l == a || set.binary_search(&q).is_err() {
            return Ok(single);
        }
        let mut img = single;
        for &k in set.iter().filter(|&&k| k != q) {
            let pair = PauliString::from_letters(w, [(q, a), (k, a)])?.with_phase(step);
            img = img.multiply(&pair)?;
        }
        Ok(img)
    })
}

/// Weighted sum of Pauli strings. Keys are letter contents with the string phase
/// folded into the complex coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    width: usize,
    terms: BTreeMap<BTreeMap<usize, Letter>, Complex64>,
}

/// Coefficients below this magnitude are treated as exact cancellations.
pub const ZERO_TOL: f64 = 1e-14;

impl PauliSum {
    pub fn zero(width: usize) -> Self {
        PauliSum {
            width,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<'a, I>(width: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex64, &'a PauliString)>,
    {
        let mut s = PauliSum::zero(width);
        for (c, p) in terms {
            s.add_term(c, p)?;
        }
        Ok(s)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, coefficient: Complex64, p: &PauliString) -> Result<()> {
        if p.width != self.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: p.width,
            });
        }
        let c = coefficient * p.phase.to_complex();
        let entry = self.terms.entry(p.letters.clone()).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() <= ZERO_TOL {
            self.terms.remove(&p.letters);
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        let mut out = self.clone();
        for (c, p) in other.iter() {
            out.add_term(c, &p)?;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = PauliSum::zero(self.width);
        for (k, &c) in &self.terms {
            let v = c * factor;
            if v.norm() > ZERO_TOL {
                out.terms.insert(k.clone(), v);
            }
        }
        out
    }

    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        let mut out = PauliSum::zero(self.width);
        for (a, pa) in self.iter() {
            for (b, pb) in other.iter() {
                out.add_term(a * b, &pa.multiply(&pb)?)?;
            }
        }
        Ok(out)
    }

    /// Terms as `(coefficient, string with phase +1)`, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (Complex64, PauliString)> + '_ {
        self.terms.iter().map(move |(k, &c)| {
            (
                c,
                PauliString {
                    phase: Phase::ONE,
                    letters: k.clone(),
                    width: self.width,
                },
            )
        })
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms
            .get(&p.letters)
            .map_or(Complex64::new(0.0, 0.0), |&c| c * p.phase.conj().to_complex())
    }

    /// Largest imaginary part among coefficients; zero for Hermitian sums.
    pub fn hermiticity_residual(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Letter contents shared by all terms, ignoring coefficients.
    pub fn string_set(&self) -> Vec<PauliString> {
        self.iter().map(|(_, p)| p).collect()
    }

    pub fn all_commute(&self) -> bool {
        let strings = self.string_set();
        strings
            .iter()
            .enumerate()
            .all(|(i, a)| strings[i + 1..].iter().all(|b| a.commutes_with(b)))
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, p)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i) {}", c.re, c.im, p.label())?;
        }
        Ok(())
    }
}
