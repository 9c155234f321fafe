//! Gold code families built from a fixed preferred pair of m-sequences.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Preferred pairs of primitive polynomials, as exponent lists (constant term
/// included). Degree 5: x^5+x^2+1 and x^5+x^4+x^3+x^2+1 (octal 45, 75).
/// Degree 6: x^6+x+1 and x^6+x^5+x^2+x+1 (octal 103, 147).
const PREFERRED_PAIRS: &[(u32, &[u32], &[u32])] = &[
    (5, &[5, 2, 0], &[5, 4, 3, 2, 0]),
    (6, &[6, 1, 0], &[6, 5, 2, 1, 0]),
];

/// Maximal-length sequence of the Fibonacci LFSR for `poly`, all-ones seed.
/// Bits are returned as 0/1.
pub fn m_sequence(degree: u32, poly: &[u32]) -> Vec<u8> {
    let n = degree as usize;
    let len = (1usize << n) - 1;
    let taps: Vec<usize> = poly
        .iter()
        .copied()
        .filter(|&e| e < degree)
        .map(|e| e as usize)
        .collect();
    let mut seq = vec![1u8; n];
    seq.reserve(len);
    while seq.len() < len {
        let k = seq.len() - n;
        let bit = taps.iter().fold(0u8, |acc, &t| acc ^ seq[k + t]);
        seq.push(bit);
    }
    seq.truncate(len);
    seq
}

/// Number of sequences in the Gold family of the given degree (2^n + 1).
pub fn family_size(degree: u32) -> usize {
    (1usize << degree) + 1
}

/// The full Gold family as 0/1 bit vectors, ordered
/// `[u, v, u^v, u^(v<<1), ..., u^(v<<(N-1))]`.
pub fn gold_family_bits(degree: u32) -> Result<Vec<Vec<u8>>> {
    let (_, pa, pb) = PREFERRED_PAIRS
        .iter()
        .find(|(d, _, _)| *d == degree)
        .ok_or_else(|| {
            Error::InvalidParameter(format!("Gold degree {degree} unsupported (use 5 or 6)"))
        })?;
    let u = m_sequence(degree, pa);
    let v = m_sequence(degree, pb);
    let len = u.len();
    let mut family = Vec::with_capacity(len + 2);
    family.push(u.clone());
    family.push(v.clone());
    for shift in 0..len {
        family.push((0..len).map(|i| u[i] ^ v[(i + shift) % len]).collect());
    }
    Ok(family)
}

/// First `count` Gold sequences of length `2^degree - 1`, mapped to
/// `±1/sqrt(N)` (bit 0 -> +, bit 1 -> -).
pub fn gold_codes(degree: u32, count: usize) -> Result<Vec<DVector<f64>>> {
    let family = gold_family_bits(degree)?;
    if count == 0 || count > family.len() {
        return Err(Error::InvalidParameter(format!(
            "requested {count} Gold sequences, family of degree {degree} has {}",
            family.len()
        )));
    }
    Ok(family
        .into_iter()
        .take(count)
        .map(|bits| {
            let scale = 1.0 / (bits.len() as f64).sqrt();
            DVector::from_iterator(
                bits.len(),
                bits.iter().map(|&b| if b == 0 { scale } else { -scale }),
            )
        })
        .collect())
}
