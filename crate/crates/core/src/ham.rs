//! Electron integral tables, their text format and the built-in H3+ dataset.
//!
//! `H = c + sum_pq h_pq a_p^dagger a_q + 1/2 sum_pqrs h_pqrs a_p^dagger a_q^dagger a_r a_s`.
//! Complex tables obey `h_pq = h*_qp` and `h_pqrs = h_qpsr = h*_rspq = h*_srqp`; real
//! tables additionally `h_pqrs = h_rqps = h_spqr = h_psrq = h_qrsp`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{jw_map, split_hamiltonian, weighted_pauli, ExcitationTerm, FermionOperator, Ladder};
use crate::pauli::{PauliString, PauliSum};

type C = Complex64;

/// Absolute tolerance for symmetry consistency.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reality {
    Complex,
    Real,
}

impl Reality {
    pub fn name(self) -> &'static str {
        match self {
            Reality::Complex => "complex",
            Reality::Real => "real",
        }
    }
}

impl fmt::Display for Reality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Index permutation plus conjugation flag: `h_t = conj?(h_{g(t)})`.
type Sym4 = ([usize; 4], bool);

const COMPLEX_GROUP: [Sym4; 4] = [
    ([0, 1, 2, 3], false),
    ([1, 0, 3, 2], false),
    ([2, 3, 0, 1], true),
    ([3, 2, 1, 0], true),
];

/// Symmetries of a square with corners 0-1-2-3; conjugation is trivial for real tables.
const REAL_GROUP: [Sym4; 8] = [
    ([0, 1, 2, 3], false),
    ([1, 0, 3, 2], false),
    ([2, 3, 0, 1], false),
    ([3, 2, 1, 0], false),
    ([2, 1, 0, 3], false),
    ([3, 0, 1, 2], false),
    ([0, 3, 2, 1], false),
    ([1, 2, 3, 0], false),
];

fn apply(g: &[usize; 4], t: [usize; 4]) -> [usize; 4] {
    [t[g[0]], t[g[1]], t[g[2]], t[g[3]]]
}

fn conj_if(v: C, c: bool) -> C {
    if c {
        v.conj()
    } else {
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralTable {
    n_modes: usize,
    reality: Reality,
    constant: f64,
    /// representative -> (value at representative, tuple it was entered as)
    one_body: BTreeMap<[usize; 2], (C, [usize; 2])>,
    two_body: BTreeMap<[usize; 4], (C, [usize; 4])>,
}

impl IntegralTable {
    pub fn new(n_modes: usize, reality: Reality) -> Self {
        IntegralTable {
            n_modes,
            reality,
            constant: 0.0,
            one_body: BTreeMap::new(),
            two_body: BTreeMap::new(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn reality(&self) -> Reality {
        self.reality
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn set_constant(&mut self, c: f64) {
        self.constant = c;
    }

    fn group(&self) -> &'static [Sym4] {
        match self.reality {
            Reality::Complex => &COMPLEX_GROUP,
            Reality::Real => &REAL_GROUP,
        }
    }

    fn check_value(&self, v: C, what: &str) -> Result<()> {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::InvalidExcitation(format!("non-finite integral {what}")));
        }
        if self.reality == Reality::Real && v.im.abs() > SYMMETRY_TOL {
            return Err(Error::RealityMismatch(format!(
                "{what} has imaginary part {} in a real table",
                v.im
            )));
        }
        Ok(())
    }

    fn check_modes(&self, idx: &[usize]) -> Result<()> {
        for &m in idx {
            if m >= self.n_modes {
                return Err(Error::ModeOutOfRange {
                    mode: m,
                    n_modes: self.n_modes,
                });
            }
        }
        Ok(())
    }

    /// Inserts `h_pq` (0-based). Entering a second member of the same orbit with an
    /// inconsistent value is an error.
    pub fn insert_one_body(&mut self, p: usize, q: usize, v: C) -> Result<()> {
        self.check_modes(&[p, q])?;
        self.check_value(v, &format!("h[{p},{q}]"))?;
        let conj = self.reality == Reality::Complex;
        let v = if self.reality == Reality::Real { C::new(v.re, 0.0) } else { v };
        if p == q && conj && v.im.abs() > SYMMETRY_TOL {
            return Err(Error::SymmetryViolation {
                first: vec![p, q],
                second: vec![q, p],
                deviation: 2.0 * v.im.abs(),
            });
        }
        let (rep, rep_v) = if [q, p] < [p, q] {
            ([q, p], conj_if(v, conj))
        } else {
            ([p, q], v)
        };
        match self.one_body.get(&rep) {
            Some(&(old, src)) => {
                let dev = (old - rep_v).norm();
                if dev > SYMMETRY_TOL {
                    return Err(Error::SymmetryViolation {
                        first: src.to_vec(),
                        second: vec![p, q],
                        deviation: dev,
                    });
                }
            }
            None => {
                self.one_body.insert(rep, (rep_v, [p, q]));
            }
        }
        Ok(())
    }

    /// Inserts `h_pqrs` (0-based).
    pub fn insert_two_body(&mut self, p: usize, q: usize, r: usize, s: usize, v: C) -> Result<()> {
        let t = [p, q, r, s];
        self.check_modes(&t)?;
        self.check_value(v, &format!("h[{p},{q},{r},{s}]"))?;
        let v = if self.reality == Reality::Real { C::new(v.re, 0.0) } else { v };
        // Images of the entered value on every orbit member; self-images must agree.
        let mut rep: Option<([usize; 4], C)> = None;
        for (g, c) in self.group() {
            let img = apply(g, t);
            let val = conj_if(v, *c);
            if img == t && (val - v).norm() > SYMMETRY_TOL {
                return Err(Error::SymmetryViolation {
                    first: t.to_vec(),
                    second: t.to_vec(),
                    deviation: (val - v).norm(),
                });
            }
            if rep.is_none_or(|(r, _)| img < r) {
                rep = Some((img, val));
            }
        }
        let (rep, rep_v) = rep.expect("group is non-empty");
        match self.two_body.get(&rep) {
            Some(&(old, src)) => {
                let dev = (old - rep_v).norm();
                if dev > SYMMETRY_TOL {
                    return Err(Error::SymmetryViolation {
                        first: src.to_vec(),
                        second: t.to_vec(),
                        deviation: dev,
                    });
                }
            }
            None => {
                self.two_body.insert(rep, (rep_v, t));
            }
        }
        Ok(())
    }

    /// `h_pq` for any index order; zero when absent.
    pub fn one_body(&self, p: usize, q: usize) -> C {
        if let Some(&(v, _)) = self.one_body.get(&[p, q]) {
            return v;
        }
        match self.one_body.get(&[q, p]) {
            Some(&(v, _)) if self.reality == Reality::Complex => v.conj(),
            Some(&(v, _)) => v,
            None => C::new(0.0, 0.0),
        }
    }

    /// `h_pqrs` for any index order; zero when absent.
    pub fn two_body(&self, p: usize, q: usize, r: usize, s: usize) -> C {
        let t = [p, q, r, s];
        for (g, c) in self.group() {
            if let Some(&(v, _)) = self.two_body.get(&apply(g, t)) {
                return conj_if(v, *c);
            }
        }
        C::new(0.0, 0.0)
    }

    /// Stored orbit representatives.
    pub fn one_body_entries(&self) -> impl Iterator<Item = ([usize; 2], C)> + '_ {
        self.one_body.iter().map(|(k, &(v, _))| (*k, v))
    }

    pub fn two_body_entries(&self) -> impl Iterator<Item = ([usize; 4], C)> + '_ {
        self.two_body.iter().map(|(k, &(v, _))| (*k, v))
    }

    /// The second-quantized Hamiltonian summed directly over all index tuples.
    pub fn fermion_operator(&self) -> Result<FermionOperator> {
        let n = self.n_modes;
        let mut h = FermionOperator::identity(n).scale(C::new(self.constant, 0.0));
        for p in 0..n {
            for q in 0..n {
                let v = self.one_body(p, q);
                if v.norm() > 0.0 {
                    h = h.add(&FermionOperator::product(
                        n,
                        v,
                        vec![(p, Ladder::Create), (q, Ladder::Annihilate)],
                    )?)?;
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.two_body(p, q, r, s);
                        if v.norm() > 0.0 {
                            h = h.add(&FermionOperator::product(
                                n,
                                0.5 * v,
                                vec![
                                    (p, Ladder::Create),
                                    (q, Ladder::Create),
                                    (r, Ladder::Annihilate),
                                    (s, Ladder::Annihilate),
                                ],
                            )?)?;
                        }
                    }
                }
            }
        }
        Ok(h)
    }
}

/// Reads the line-oriented integral format.
///
/// ```text
/// norb 2 reality real
/// # value [imag] p q r s   (1-based; r = s = 0 for one-body; all zero for the constant)
/// -1.25  1 1 0 0
///  0.50  1 2 2 1
/// ```
pub fn parse_integrals(doc: &str) -> Result<IntegralTable> {
    let perr = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = doc
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines
        .next()
        .ok_or_else(|| perr(1, "empty document".into()))?;
    let mut table = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["norb", n, "reality", r] => {
            let n: usize = n
                .parse()
                .map_err(|_| perr(ln, format!("bad orbital count {n:?}")))?;
            let reality = match r {
                "real" => Reality::Real,
                "complex" => Reality::Complex,
                _ => return Err(perr(ln, format!("reality must be real or complex, got {r:?}"))),
            };
            IntegralTable::new(n, reality)
        }
        _ => return Err(perr(ln, "expected `norb <n> reality <complex|real>`".into())),
    };
    let mut have_constant = false;
    for (ln, line) in lines {
        let tok: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| perr(ln, format!("bad number {s:?}")))
        };
        let idx = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| perr(ln, format!("bad index {s:?}")))
        };
        let (value, ix) = match tok.len() {
            5 => (C::new(num(tok[0])?, 0.0), &tok[1..]),
            6 => (C::new(num(tok[0])?, num(tok[1])?), &tok[2..]),
            k => return Err(perr(ln, format!("expected 5 or 6 fields, got {k}"))),
        };
        if table.reality == Reality::Real && value.im != 0.0 {
            return Err(Error::RealityMismatch(format!(
                "line {ln}: imaginary part {} in a real table",
                value.im
            )));
        }
        let i: Vec<usize> = ix.iter().map(|s| idx(s)).collect::<Result<_>>()?;
        let at_line = |e: Error| match e {
            Error::SymmetryViolation { .. } | Error::RealityMismatch(_) => e,
            other => perr(ln, other.to_string()),
        };
        match i[..] {
            [0, 0, 0, 0] => {
                if value.im != 0.0 {
                    return Err(perr(ln, "constant shift must be real".into()));
                }
                if have_constant {
                    return Err(perr(ln, "constant shift given twice".into()));
                }
                have_constant = true;
                table.set_constant(value.re);
            }
            [p, q, 0, 0] if p > 0 && q > 0 => {
                table.insert_one_body(p - 1, q - 1, value).map_err(at_line)?;
            }
            [p, q, r, s] if p > 0 && q > 0 && r > 0 && s > 0 => {
                table
                    .insert_two_body(p - 1, q - 1, r - 1, s - 1, value)
                    .map_err(at_line)?;
            }
            _ => return Err(perr(ln, format!("invalid index pattern {:?}", i))),
        }
    }
    Ok(table)
}

/// `weight * G~_p^p` or `weight * G~_pq^pq` (`p < q`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LocalTerm {
    Density { p: usize, weight: f64 },
    Coulomb { p: usize, q: usize, weight: f64 },
}

impl LocalTerm {
    pub fn weight(&self) -> f64 {
        match self {
            LocalTerm::Density { weight, .. } | LocalTerm::Coulomb { weight, .. } => *weight,
        }
    }

    /// `G~_p^p -> I - Z_p`, `G~_pq^pq -> (-I + Z_p + Z_q - Z_p Z_q) / 2`, weighted.
    pub fn pauli(&self, n: usize) -> Result<PauliSum> {
        use crate::pauli::Letter::Z;
        let id = PauliString::identity(n);
        match *self {
            LocalTerm::Density { p, weight } => {
                let z = PauliString::single(n, p, Z)?;
                PauliSum::from_terms(n, [(C::new(weight, 0.0), &id), (C::new(-weight, 0.0), &z)])
            }
            LocalTerm::Coulomb { p, q, weight } => {
                let h = 0.5 * weight;
                let zp = PauliString::single(n, p, Z)?;
                let zq = PauliString::single(n, q, Z)?;
                let zz = PauliString::from_letters(n, [(p, Z), (q, Z)])?;
                PauliSum::from_terms(
                    n,
                    [
                        (C::new(-h, 0.0), &id),
                        (C::new(h, 0.0), &zp),
                        (C::new(h, 0.0), &zq),
                        (C::new(-h, 0.0), &zz),
                    ],
                )
            }
        }
    }
}

/// A Hamiltonian as weighted local terms and excitation generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianTermList {
    pub n_modes: usize,
    pub reality: Reality,
    pub constant: f64,
    pub local: Vec<LocalTerm>,
    /// Weighted generators in canonical order.
    pub excitations: Vec<ExcitationTerm>,
}

impl HamiltonianTermList {
    pub fn is_empty(&self) -> bool {
        self.constant == 0.0 && self.local.is_empty() && self.excitations.is_empty()
    }

    /// Drops the local part.
    pub fn non_local(&self) -> HamiltonianTermList {
        HamiltonianTermList {
            constant: 0.0,
            local: Vec::new(),
            ..self.clone()
        }
    }

    /// Qubit operator of the whole list.
    pub fn pauli_sum(&self) -> Result<PauliSum> {
        let n = self.n_modes;
        let mut s = PauliSum::zero(n);
        s.add_term(C::new(self.constant, 0.0), &PauliString::identity(n))?;
        for t in &self.local {
            s = s.add(&t.pauli(n)?)?;
        }
        for t in &self.excitations {
            s = s.add(&weighted_pauli(t, n)?)?;
        }
        Ok(s)
    }
}

pub fn term_list(h: &IntegralTable) -> Result<HamiltonianTermList> {
    split_hamiltonian(h)
}

/// Rounded H3+ (STO-3G) integrals, modes ordered alpha_0, beta_0, alpha_1, ...
pub const H3PLUS_INTEGRALS: &str = include_str!("../assets/h3plus.int");

pub fn h3plus_table() -> IntegralTable {
    parse_integrals(H3PLUS_INTEGRALS).expect("bundled H3+ file parses")
}

pub fn h3plus_builtin() -> HamiltonianTermList {
    term_list(&h3plus_table()).expect("bundled H3+ table is consistent")
}

/// Direct qubit image of the table, for reconstruction checks.
pub fn table_pauli(h: &IntegralTable) -> Result<PauliSum> {
    jw_map(&h.fermion_operator()?)
}
