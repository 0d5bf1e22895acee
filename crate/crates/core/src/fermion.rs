//! Ladder operators, the Jordan-Wigner map and excitation generators.
//!
//! Qubit `p` holds mode `p`; `|1>` is occupied, so
//! `a_p^dagger -> 1/2 Z_0 ... Z_{p-1} (X_p - i Y_p)`.
//!
//! Generators follow `G_p^q = i(a_p^dagger a_q - h.c.)`,
//! `G_pq^rs = i(a_p^dagger a_q^dagger a_r a_s - h.c.)` and the symmetrized
//! `G~ = L + h.c.` of the same ladder product `L`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ham::{HamiltonianTermList, IntegralTable, LocalTerm, Reality};
use crate::pauli::{Letter, PauliString, PauliSum, ZERO_TOL};

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ladder {
    Create,
    Annihilate,
}

pub type Factor = (usize, Ladder);

/// Sum of ladder-operator products.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    terms: BTreeMap<Vec<Factor>, C>,
}

impl FermionOperator {
    pub fn zero(n_modes: usize) -> Self {
        FermionOperator {
            n_modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self::product(n_modes, C::new(1.0, 0.0), Vec::new()).expect("empty product is valid")
    }

    pub fn product(n_modes: usize, coefficient: C, factors: Vec<Factor>) -> Result<Self> {
        for &(m, _) in &factors {
            if m >= n_modes {
                return Err(Error::ModeOutOfRange { mode: m, n_modes });
            }
        }
        let mut op = FermionOperator::zero(n_modes);
        op.add_raw(coefficient, factors);
        Ok(op)
    }

    pub fn creation(n_modes: usize, p: usize) -> Result<Self> {
        Self::product(n_modes, C::new(1.0, 0.0), vec![(p, Ladder::Create)])
    }

    pub fn annihilation(n_modes: usize, p: usize) -> Result<Self> {
        Self::product(n_modes, C::new(1.0, 0.0), vec![(p, Ladder::Annihilate)])
    }

    /// `n_p = a_p^dagger a_p`
    pub fn number(n_modes: usize, p: usize) -> Result<Self> {
        Self::product(
            n_modes,
            C::new(1.0, 0.0),
            vec![(p, Ladder::Create), (p, Ladder::Annihilate)],
        )
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Factor], C)> {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_raw(&mut self, c: C, factors: Vec<Factor>) {
        let e = self.terms.entry(factors.clone()).or_insert(C::new(0.0, 0.0));
        *e += c;
        if e.norm() <= ZERO_TOL {
            self.terms.remove(&factors);
        }
    }

    fn check_modes(&self, other: &FermionOperator) -> Result<()> {
        if self.n_modes != other.n_modes {
            return Err(Error::WidthMismatch {
                left: self.n_modes,
                right: other.n_modes,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FermionOperator) -> Result<FermionOperator> {
        self.check_modes(other)?;
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            out.add_raw(c, k.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: C) -> FermionOperator {
        let mut out = FermionOperator::zero(self.n_modes);
        for (k, &c) in &self.terms {
            out.add_raw(c * factor, k.clone());
        }
        out
    }

    pub fn multiply(&self, other: &FermionOperator) -> Result<FermionOperator> {
        self.check_modes(other)?;
        let mut out = FermionOperator::zero(self.n_modes);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let mut f = a.clone();
                f.extend_from_slice(b);
                out.add_raw(ca * cb, f);
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> FermionOperator {
        let mut out = FermionOperator::zero(self.n_modes);
        for (k, &c) in &self.terms {
            let f = k
                .iter()
                .rev()
                .map(|&(m, l)| {
                    (
                        m,
                        match l {
                            Ladder::Create => Ladder::Annihilate,
                            Ladder::Annihilate => Ladder::Create,
                        },
                    )
                })
                .collect();
            out.add_raw(c.conj(), f);
        }
        out
    }

    /// Canonical form: creators first, then annihilators, each group in ascending
    /// mode order, using the anticommutation relations.
    pub fn normal_ordered(&self) -> FermionOperator {
        let mut out = FermionOperator::zero(self.n_modes);
        let mut stack: Vec<(C, Vec<Factor>)> =
            self.terms.iter().map(|(k, &c)| (c, k.clone())).collect();
        let key = |f: &Factor| (f.1, f.0);
        while let Some((c, f)) = stack.pop() {
            match (0..f.len().saturating_sub(1)).find(|&i| key(&f[i]) >= key(&f[i + 1])) {
                None => out.add_raw(c, f),
                Some(i) => {
                    let (a, b) = (f[i], f[i + 1]);
                    if a == b {
                        continue;
                    }
                    let mut swapped = f.clone();
                    swapped.swap(i, i + 1);
                    stack.push((-c, swapped));
                    if a.0 == b.0 {
                        // a_p a_p^dagger = 1 - a_p^dagger a_p
                        let mut contracted = f[..i].to_vec();
                        contracted.extend_from_slice(&f[i + 2..]);
                        stack.push((c, contracted));
                    }
                }
            }
        }
        out
    }

    /// Largest coefficient deviation between the operator and its adjoint.
    pub fn hermiticity_residual(&self) -> f64 {
        let d = self
            .normal_ordered()
            .add(&self.adjoint().normal_ordered().scale(C::new(-1.0, 0.0)))
            .expect("same mode count");
        d.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }
}

fn ladder_pauli(n_modes: usize, p: usize, kind: Ladder) -> Result<PauliSum> {
    let parity = (0..p).map(|k| (k, Letter::Z));
    let x = PauliString::from_letters(n_modes, parity.clone().chain([(p, Letter::X)]))?;
    let y = PauliString::from_letters(n_modes, parity.chain([(p, Letter::Y)]))?;
    let iy = match kind {
        Ladder::Create => -0.5,
        Ladder::Annihilate => 0.5,
    };
    PauliSum::from_terms(n_modes, [(C::new(0.5, 0.0), &x), (C::new(0.0, iy), &y)])
}

/// Jordan-Wigner image of a fermionic operator.
pub fn jw_map(op: &FermionOperator) -> Result<PauliSum> {
    let n = op.n_modes;
    let mut out = PauliSum::zero(n);
    for (factors, &c) in &op.terms {
        let mut acc = PauliSum::from_terms(n, [(c, &PauliString::identity(n))])?;
        for &(m, l) in factors {
            if m >= n {
                return Err(Error::ModeOutOfRange { mode: m, n_modes: n });
            }
            acc = acc.multiply(&ladder_pauli(n, m, l)?)?;
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExcitationKind {
    /// `G_p^q`, `p < q`
    Single { p: usize, q: usize },
    /// `G_pq^rs` with `p < q`, `r < s`, `p < r` and all four distinct.
    Double {
        p: usize,
        q: usize,
        r: usize,
        s: usize,
    },
    /// `G_pj^qj = -n_j G_p^q`, `p < q`, `j` distinct from both.
    ControlledSingle { p: usize, q: usize, j: usize },
    /// `i(a_o1^dagger ... a_oN^dagger a_v1 ... a_vN - h.c.)`, both lists sorted.
    Higher { occ: Vec<usize>, virt: Vec<usize> },
}

impl ExcitationKind {
    /// Modes carrying creation operators in the ladder product.
    pub fn subscripts(&self) -> Vec<usize> {
        match self {
            ExcitationKind::Single { p, .. } => vec![*p],
            ExcitationKind::Double { p, q, .. } => vec![*p, *q],
            ExcitationKind::ControlledSingle { p, j, .. } => vec![*p, *j],
            ExcitationKind::Higher { occ, .. } => occ.clone(),
        }
    }

    /// Modes carrying annihilation operators in the ladder product.
    pub fn superscripts(&self) -> Vec<usize> {
        match self {
            ExcitationKind::Single { q, .. } => vec![*q],
            ExcitationKind::Double { r, s, .. } => vec![*r, *s],
            ExcitationKind::ControlledSingle { q, j, .. } => vec![*q, *j],
            ExcitationKind::Higher { virt, .. } => virt.clone(),
        }
    }

    pub fn max_mode(&self) -> usize {
        self.subscripts()
            .into_iter()
            .chain(self.superscripts())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for ExcitationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<usize>| v.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "[{}->{}]", join(self.subscripts()), join(self.superscripts()))
    }
}

/// Weighted excitation generator. `coefficient` is an angle or a Hamiltonian weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcitationTerm {
    pub kind: ExcitationKind,
    pub symmetrized: bool,
    pub coefficient: f64,
}

fn sort2(a: usize, b: usize) -> (usize, usize, f64) {
    if a < b {
        (a, b, 1.0)
    } else {
        (b, a, -1.0)
    }
}

/// Sorts in place and returns the permutation parity as a sign.
fn sort_with_sign(v: &mut [usize]) -> f64 {
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    sign
}

impl ExcitationTerm {
    /// `coefficient * G_p^q` (or `G~`), brought to `p < q`.
    pub fn single(p: usize, q: usize, symmetrized: bool, coefficient: f64) -> Result<Self> {
        if p == q {
            return Err(Error::InvalidExcitation(format!(
                "single excitation needs distinct modes, got {p}->{q}"
            )));
        }
        let (a, b, s) = sort2(p, q);
        let sign = if symmetrized { 1.0 } else { s };
        Ok(ExcitationTerm {
            kind: ExcitationKind::Single { p: a, q: b },
            symmetrized,
            coefficient: sign * coefficient,
        })
    }

    /// `coefficient * G_pq^rs` in canonical form. Reordering signs are folded into
    /// the coefficient.
    pub fn double(p: usize, q: usize, r: usize, s: usize, symmetrized: bool, coefficient: f64) -> Result<Self> {
        let mut all = [p, q, r, s];
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidExcitation(format!(
                "double excitation needs four distinct modes, got {p},{q}->{r},{s}"
            )));
        }
        let (mut sub, s1) = {
            let (a, b, s) = sort2(p, q);
            ([a, b], s)
        };
        let (mut sup, s2) = {
            let (a, b, s) = sort2(r, s);
            ([a, b], s)
        };
        let mut sign = s1 * s2;
        if sup[0] < sub[0] {
            std::mem::swap(&mut sub, &mut sup);
            if !symmetrized {
                sign = -sign;
            }
        }
        Ok(ExcitationTerm {
            kind: ExcitationKind::Double {
                p: sub[0],
                q: sub[1],
                r: sup[0],
                s: sup[1],
            },
            symmetrized,
            coefficient: sign * coefficient,
        })
    }

    /// `coefficient * G_pj^qj`, brought to `p < q`.
    pub fn controlled_single(p: usize, q: usize, j: usize, symmetrized: bool, coefficient: f64) -> Result<Self> {
        if j == p || j == q {
            return Err(Error::InvalidExcitation(format!(
                "control mode {j} coincides with an excitation mode ({p}->{q})"
            )));
        }
        if p == q {
            return Err(Error::InvalidExcitation(format!(
                "controlled single needs distinct modes, got {p}->{q}"
            )));
        }
        let (a, b, s) = sort2(p, q);
        let sign = if symmetrized { 1.0 } else { s };
        Ok(ExcitationTerm {
            kind: ExcitationKind::ControlledSingle { p: a, q: b, j },
            symmetrized,
            coefficient: sign * coefficient,
        })
    }

    pub fn higher(occ: &[usize], virt: &[usize], symmetrized: bool, coefficient: f64) -> Result<Self> {
        if occ.is_empty() || occ.len() != virt.len() {
            return Err(Error::InvalidExcitation(format!(
                "higher excitation needs equal non-empty lists, got {occ:?}->{virt:?}"
            )));
        }
        let mut all: Vec<usize> = occ.iter().chain(virt).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidExcitation(format!(
                "overlapping or repeated modes in {occ:?}->{virt:?}"
            )));
        }
        let mut o = occ.to_vec();
        let mut v = virt.to_vec();
        let sign = sort_with_sign(&mut o) * sort_with_sign(&mut v);
        Ok(ExcitationTerm {
            kind: ExcitationKind::Higher { occ: o, virt: v },
            symmetrized,
            coefficient: sign * coefficient,
        })
    }

    pub fn with_coefficient(&self, coefficient: f64) -> Self {
        ExcitationTerm {
            coefficient,
            ..self.clone()
        }
    }

    /// The ladder product `L` whose (anti)symmetrization is the generator.
    pub fn ladder(&self, n_modes: usize) -> Result<FermionOperator> {
        let mut f: Vec<Factor> = self
            .kind
            .subscripts()
            .into_iter()
            .map(|m| (m, Ladder::Create))
            .collect();
        f.extend(self.kind.superscripts().into_iter().map(|m| (m, Ladder::Annihilate)));
        FermionOperator::product(n_modes, C::new(1.0, 0.0), f)
    }

    /// Unit-weight generator as a fermionic operator.
    pub fn generator(&self, n_modes: usize) -> Result<FermionOperator> {
        let l = self.ladder(n_modes)?;
        let ld = l.adjoint();
        if self.symmetrized {
            l.add(&ld)
        } else {
            l.add(&ld.scale(C::new(-1.0, 0.0)))
                .map(|d| d.scale(C::new(0.0, 1.0)))
        }
    }
}

impl fmt::Display for ExcitationTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:+.6} {}{}",
            self.coefficient,
            if self.symmetrized { "G~" } else { "G" },
            self.kind
        )
    }
}

/// Unit-weight generator of `t` in the Pauli basis (the coefficient is not applied).
pub fn generator_pauli(t: &ExcitationTerm, n_qubits: usize) -> Result<PauliSum> {
    if t.kind.max_mode() >= n_qubits {
        return Err(Error::ModeOutOfRange {
            mode: t.kind.max_mode(),
            n_modes: n_qubits,
        });
    }
    jw_map(&t.generator(n_qubits)?)
}

/// `coefficient * generator`.
pub fn weighted_pauli(t: &ExcitationTerm, n_qubits: usize) -> Result<PauliSum> {
    Ok(generator_pauli(t, n_qubits)?.scale(C::new(t.coefficient, 0.0)))
}

/// Image of an antisymmetrized term under `exp(-i pi/2 n_j) G exp(i pi/2 n_j)`.
///
/// Returns the image term and a sign: `(+G~, +1)` for a subscript mode, `(G~, -1)`
/// (meaning `-G~`) for a superscript mode and `(G, +1)` otherwise. For controlled
/// singles the control mode sits on both sides and leaves the term unchanged.
pub fn local_equivalence_conjugate(t: &ExcitationTerm, j: usize) -> Result<(ExcitationTerm, f64)> {
    if t.symmetrized {
        return Err(Error::InvalidExcitation(
            "local equivalence maps antisymmetrized generators".into(),
        ));
    }
    let sub = t.kind.subscripts();
    let sup = t.kind.superscripts();
    let (in_sub, in_sup) = (sub.contains(&j), sup.contains(&j));
    let sym = ExcitationTerm {
        symmetrized: true,
        ..t.clone()
    };
    Ok(match (in_sub, in_sup) {
        (true, false) => (sym, 1.0),
        (false, true) => (sym, -1.0),
        _ => (t.clone(), 1.0),
    })
}

/// Canonical class of a quartic index tuple `a_p^dagger a_q^dagger a_r a_s`.
enum Quartic {
    Zero,
    /// `sign * L_ab^ab` with `a < b`.
    Coulomb { a: usize, b: usize, sign: f64 },
    /// Sign for `L` (symmetrized) and for the antisymmetrized generator.
    Controlled { p: usize, q: usize, j: usize, sign_sym: f64, sign_anti: f64 },
    Double { key: ExcitationKind, sign_sym: f64, sign_anti: f64 },
}

fn classify_quartic(p: usize, q: usize, r: usize, s: usize) -> Quartic {
    if p == q || r == s {
        return Quartic::Zero;
    }
    let (a, b, s1) = sort2(p, q);
    let (c, d, s2) = sort2(r, s);
    if (a, b) == (c, d) {
        return Quartic::Coulomb { a, b, sign: s1 * s2 };
    }
    let shared: Vec<usize> = [a, b].into_iter().filter(|m| *m == c || *m == d).collect();
    if let [j] = shared[..] {
        // Move j into second position on both sides.
        let (x, sx) = if p == j { (q, -1.0) } else { (p, 1.0) };
        let (y, sy) = if r == j { (s, -1.0) } else { (r, 1.0) };
        let base = sx * sy;
        let (lo, hi, swapped) = sort2(x, y);
        return Quartic::Controlled {
            p: lo,
            q: hi,
            j,
            sign_sym: base,
            sign_anti: base * swapped,
        };
    }
    let t_sym = ExcitationTerm::double(p, q, r, s, true, 1.0).expect("distinct modes");
    let t_anti = ExcitationTerm::double(p, q, r, s, false, 1.0).expect("distinct modes");
    Quartic::Double {
        key: t_sym.kind,
        sign_sym: t_sym.coefficient,
        sign_anti: t_anti.coefficient,
    }
}

/// Splits an integral table into weighted generators.
///
/// Complex tables give `1/2 Im(h_pq) G + 1/2 Re(h_pq) G~` and
/// `1/4 Im(h_pqrs) G + 1/4 Re(h_pqrs) G~`; real tables give `1/2 h_pq G~` and
/// `1/8 h_pqrs (G~_pq^rs + G~_ps^rq)`. Density (`G~_p^p`) and Coulomb
/// (`G~_pq^pq`) terms are kept apart as local terms.
pub fn split_hamiltonian(h: &IntegralTable) -> Result<HamiltonianTermList> {
    let n = h.n_modes();
    let real = h.reality() == Reality::Real;
    // (kind, symmetrized) -> weight
    let mut acc: BTreeMap<(ExcitationKind, bool), f64> = BTreeMap::new();
    let mut density: BTreeMap<usize, f64> = BTreeMap::new();
    let mut coulomb: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut put = |k: ExcitationKind, sym: bool, w: f64| {
        if w != 0.0 {
            *acc.entry((k, sym)).or_insert(0.0) += w;
        }
    };

    for p in 0..n {
        for q in 0..n {
            let v = h.one_body(p, q);
            let (re, im) = if real { (v.re, 0.0) } else { (v.re, v.im) };
            if p == q {
                *density.entry(p).or_insert(0.0) += 0.5 * re;
                continue;
            }
            let (a, b, sgn) = sort2(p, q);
            put(ExcitationKind::Single { p: a, q: b }, true, 0.5 * re);
            put(ExcitationKind::Single { p: a, q: b }, false, 0.5 * im * sgn);
        }
    }

    let mut quartic = |p: usize, q: usize, r: usize, s: usize, w_sym: f64, w_anti: f64| {
        match classify_quartic(p, q, r, s) {
            Quartic::Zero => {}
            Quartic::Coulomb { a, b, sign } => {
                *coulomb.entry((a, b)).or_insert(0.0) += sign * w_sym;
            }
            Quartic::Controlled {
                p,
                q,
                j,
                sign_sym,
                sign_anti,
            } => {
                let k = ExcitationKind::ControlledSingle { p, q, j };
                put(k.clone(), true, sign_sym * w_sym);
                put(k, false, sign_anti * w_anti);
            }
            Quartic::Double {
                key,
                sign_sym,
                sign_anti,
            } => {
                put(key.clone(), true, sign_sym * w_sym);
                put(key, false, sign_anti * w_anti);
            }
        }
    };

    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = h.two_body(p, q, r, s);
                    if v == C::new(0.0, 0.0) {
                        continue;
                    }
                    if real {
                        let w = 0.125 * v.re;
                        quartic(p, q, r, s, w, 0.0);
                        quartic(p, s, r, q, w, 0.0);
                    } else {
                        quartic(p, q, r, s, 0.25 * v.re, 0.25 * v.im);
                    }
                }
            }
        }
    }

    let keep = |w: f64| w.abs() > ZERO_TOL;
    let mut local = Vec::new();
    for (p, w) in density {
        if keep(w) {
            local.push(LocalTerm::Density { p, weight: w });
        }
    }
    for ((a, b), w) in coulomb {
        if keep(w) {
            local.push(LocalTerm::Coulomb { p: a, q: b, weight: w });
        }
    }
    let excitations = acc
        .into_iter()
        .filter(|(_, w)| keep(*w))
        .map(|((kind, symmetrized), coefficient)| ExcitationTerm {
            kind,
            symmetrized,
            coefficient,
        })
        .collect();
    Ok(HamiltonianTermList {
        n_modes: n,
        reality: h.reality(),
        constant: h.constant(),
        local,
        excitations,
    })
}
