//! Higher-order excitations.
//!
//! On the `2N` orbital qubits every generator string is a word in `{X, Y}`. One MS
//! frame diagonalizes the strings at Hamming distance one from a centre word, so
//! the MS count is twice the size of a covering of the strings by radius-1 balls.

use std::collections::BTreeMap;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::fermion::{generator_pauli, ExcitationTerm};
use crate::pauli::{Letter, MsAxis, PauliString};

use super::frame::{plan, Entry};
use super::{window, SynthesisPlan};

const SEARCH_BUDGET: usize = 4_000_000;

/// Smallest set of centre words (bit `i` set = `Y` on orbital `i`) whose radius-1
/// balls cover `words`. Exact for small instances, greedy once the search budget runs out.
pub fn even_centre_cover(words: &[u32], bits: usize) -> Vec<u32> {
    let mut sorted = words.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return vec![];
    }
    let lower = sorted.len().div_ceil(bits);
    let mut budget = SEARCH_BUDGET;
    for limit in lower..=sorted.len() {
        let mut chosen = Vec::new();
        match search(&sorted, bits, limit, &mut chosen, &mut budget) {
            Some(true) => return chosen,
            Some(false) => continue,
            None => break,
        }
    }
    greedy(&sorted, bits)
}

/// `Some(found)` or `None` once the budget is spent.
fn search(words: &[u32], bits: usize, limit: usize, chosen: &mut Vec<u32>, budget: &mut usize) -> Option<bool> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let covered = |w: u32, cs: &[u32]| cs.iter().any(|&c| (c ^ w).count_ones() == 1);
    let uncovered: Vec<u32> = words.iter().copied().filter(|&w| !covered(w, chosen)).collect();
    let Some(&first) = uncovered.first() else {
        return Some(true);
    };
    if chosen.len() + uncovered.len().div_ceil(bits) > limit {
        return Some(false);
    }
    for i in 0..bits {
        chosen.push(first ^ (1 << i));
        match search(words, bits, limit, chosen, budget) {
            Some(false) => {}
            other => {
                if other.is_none() {
                    chosen.pop();
                }
                return other;
            }
        }
        chosen.pop();
    }
    Some(false)
}

fn greedy(words: &[u32], bits: usize) -> Vec<u32> {
    let mut left: Vec<u32> = words.to_vec();
    let mut out = Vec::new();
    while let Some(&first) = left.first() {
        // candidates adjacent to some uncovered word, best gain first, lowest word on ties
        let mut best = (0usize, u32::MAX);
        for &w in &left {
            for i in 0..bits {
                let c = w ^ (1 << i);
                let gain = left.iter().filter(|&&x| (x ^ c).count_ones() == 1).count();
                if gain > best.0 || (gain == best.0 && c < best.1) {
                    best = (gain, c);
                }
            }
        }
        let c = if best.0 == 0 { first ^ 1 } else { best.1 };
        left.retain(|&x| (x ^ c).count_ones() != 1);
        out.push(c);
    }
    out
}

/// One plan per covering centre for `exp(-i theta G)` of the `N`-th order excitation.
pub fn higher_excitation_plans(n: usize, occ: &[usize], virt: &[usize], theta: f64) -> Result<Vec<SynthesisPlan>> {
    let t = ExcitationTerm::higher(occ, virt, false, theta)?;
    let g = generator_pauli(&t, n)?;
    let mut orbital: Vec<usize> = occ.iter().chain(virt).copied().collect();
    orbital.sort_unstable();
    if orbital.len() > 31 {
        return Err(Error::InvalidExcitation("excitation order too large".into()));
    }
    let strings: Vec<(f64, PauliString)> = g.iter().map(|(c, p)| (c.re * t.coefficient, p)).collect();
    let encode = |s: &PauliString| -> Result<u32> {
        let mut w = 0;
        for (i, &m) in orbital.iter().enumerate() {
            match s.letter(m) {
                Some(Letter::Y) => w |= 1 << i,
                Some(Letter::X) => {}
                _ => return Err(Error::InvalidExcitation(format!("{s} is not an X/Y word on {orbital:?}"))),
            }
        }
        Ok(w)
    };
    let words = strings.iter().map(|(_, s)| encode(s)).collect::<Result<Vec<_>>>()?;
    let centres = even_centre_cover(&words, orbital.len());
    let mut groups: BTreeMap<usize, Vec<Entry>> = BTreeMap::new();
    for ((c, s), w) in strings.iter().zip(&words) {
        let k = centres
            .iter()
            .position(|&x| (x ^ w).count_ones() == 1)
            .expect("cover reaches every word");
        let flip = (centres[k] ^ w).trailing_zeros() as usize;
        groups.entry(k).or_default().push(Entry::new(orbital[flip], s.clone(), *c));
    }
    let win = window(&strings);
    groups
        .into_iter()
        .map(|(k, entries)| {
            let ys = centres[k].count_ones() as usize;
            let axis = if 2 * ys > orbital.len() { MsAxis::YY } else { MsAxis::XX };
            plan(n, Some(axis), &win, &entries)
        })
        .collect()
}

/// `exp(-i theta G)` for `G = i(a_o1^dagger ... a_vN - h.c.)`.
pub fn compile_higher_excitation(n: usize, occ: &[usize], virt: &[usize], theta: f64) -> Result<Circuit> {
    let mut c = Circuit::new(n);
    for p in higher_excitation_plans(n, occ, virt, theta)? {
        p.emit(&mut c)?;
    }
    Ok(c)
}
