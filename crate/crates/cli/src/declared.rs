//! Rebuilds the target unitary a circuit file declares in its metadata.

use std::path::Path;

use ionjw::fermion::{weighted_pauli, ExcitationTerm};
use ionjw::pauli::{PauliString, PauliSum};
use ionjw::sim::{generator_unitary, DenseOperator};
use ionjw::trotter::{trotter_reference, uccsd_reference, AnsatzSpec};

use crate::{load_terms, Failure};

type Res<T> = std::result::Result<T, Failure>;

fn field<'a>(c: &'a ionjw::circuit::Circuit, key: &str) -> Res<&'a str> {
    c.metadata
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Failure::input(format!("metadata has no {key:?} entry")))
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Res<T> {
    v.trim()
        .parse()
        .map_err(|_| Failure::input(format!("metadata {key}={v:?} is not a number")))
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Res<Vec<T>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| number(key, x)).collect()
}

fn lib(e: ionjw::Error) -> Failure {
    Failure::input(format!("declared generator: {e}"))
}

fn exp_term(n: usize, t: &ExcitationTerm, theta: f64) -> Res<DenseOperator> {
    generator_unitary(&weighted_pauli(t, n).map_err(lib)?, theta).map_err(lib)
}

/// `exp(-i theta G)` (or the product the op stands for) from the metadata.
pub fn target_unitary(c: &ionjw::circuit::Circuit) -> Res<DenseOperator> {
    let op = field(c, "op")?;
    match op {
        "uccsd" => {
            let spec = AnsatzSpec {
                n_modes: number("n", field(c, "n")?)?,
                occupied: list("occupied", field(c, "occupied")?)?,
                virtual_modes: list("virtual", field(c, "virtual")?)?,
                params: list("params", field(c, "params")?)?,
            };
            return uccsd_reference(&spec).map_err(lib);
        }
        "trotter" => {
            let dt: f64 = number("dt", field(c, "dt")?)?;
            let source = field(c, "source")?;
            let mut terms = match source.split_once(':') {
                Some(("builtin", b)) => load_terms(Some(b), None)?,
                Some(("file", p)) => load_terms(None, Some(Path::new(p)))?,
                _ => return Err(Failure::input(format!("metadata source={source:?} is not builtin:NAME or file:PATH"))),
            };
            if c.metadata.get("scope").map(String::as_str) == Some("non-local") {
                terms = terms.non_local();
            }
            return trotter_reference(&terms, dt).map_err(lib);
        }
        _ => {}
    }
    let theta: f64 = number("theta", field(c, "theta")?)?;
    if op == "rotation" {
        let p = PauliString::from_label(field(c, "pauli")?).map_err(lib)?;
        let g = PauliSum::from_terms(p.width(), [(1.0.into(), &p)]).map_err(lib)?;
        return generator_unitary(&g, theta / 2.0).map_err(lib);
    }
    let n: usize = number("n", field(c, "n")?)?;
    let orb: Vec<usize> = list("orbitals", field(c, "orbitals")?)?;
    let sym = c.metadata.get("symmetrized").map(String::as_str) == Some("true");
    let want = |k: usize| {
        if orb.len() == k {
            Ok(())
        } else {
            Err(Failure::input(format!("metadata orbitals: {op} needs {k} indices, got {}", orb.len())))
        }
    };
    let term = match op {
        "single" => {
            want(2)?;
            ExcitationTerm::single(orb[0], orb[1], sym, 1.0)
        }
        "double" | "mixed" => {
            want(4)?;
            ExcitationTerm::double(orb[0], orb[1], orb[2], orb[3], sym, 1.0)
        }
        "controlled" => {
            want(2)?;
            let j = number("control", field(c, "control")?)?;
            ExcitationTerm::controlled_single(orb[0], orb[1], j, sym, 1.0)
        }
        "higher" => {
            let (occ, virt) = orb.split_at(orb.len() / 2);
            ExcitationTerm::higher(occ, virt, sym, 1.0)
        }
        "coupled" => {
            want(4)?;
            let (p, q, r, s) = (orb[0], orb[1], orb[2], orb[3]);
            let a = ExcitationTerm::double(p, q, r, s, false, 1.0).map_err(lib)?;
            let b = ExcitationTerm::double(p, s, q, r, false, -1.0).map_err(lib)?;
            let g = weighted_pauli(&a, n).map_err(lib)?.add(&weighted_pauli(&b, n).map_err(lib)?).map_err(lib)?;
            return generator_unitary(&g, theta).map_err(lib);
        }
        other => return Err(Failure::input(format!("metadata op={other:?} is not a known generator"))),
    }
    .map_err(lib)?;
    exp_term(n, &term, theta)
}
