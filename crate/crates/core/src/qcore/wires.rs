//! Index bookkeeping for big-endian qubit registers: wire 0 is the most
//! significant bit of a computational-basis index.

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 12;

#[inline]
pub fn wire_mask(wire: usize, n_wires: usize) -> usize {
    1 << (n_wires - 1 - wire)
}

pub fn check_wires(wires: &[usize], n_wires: usize) -> Result<()> {
    if wires.is_empty() {
        return Err(Error::EmptyWireList);
    }
    let mut seen = 0usize;
    for &w in wires {
        if w >= n_wires {
            return Err(Error::WireOutOfRange { wire: w, n_wires });
        }
        if seen & (1 << w) != 0 {
            return Err(Error::DuplicateWire(w));
        }
        seen |= 1 << w;
    }
    Ok(())
}

pub fn qubits_for_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::RegisterTooLarge(n));
    }
    Ok(n)
}

/// Offsets of every local basis index of `wires` inside the full register.
///
/// Entry `l` holds the full-register bit pattern whose bits on `wires`
/// spell `l` (with `wires[0]` as the most significant local bit) and whose
/// other bits are zero.
pub fn local_offsets(wires: &[usize], n_wires: usize) -> Vec<usize> {
    let k = wires.len();
    (0..1usize << k)
        .map(|l| {
            wires
                .iter()
                .enumerate()
                .filter(|(j, _)| (l >> (k - 1 - j)) & 1 == 1)
                .fold(0, |acc, (_, &w)| acc | wire_mask(w, n_wires))
        })
        .collect()
}

/// Wires of the register not in `wires`, ascending.
pub fn complement(wires: &[usize], n_wires: usize) -> Vec<usize> {
    (0..n_wires).filter(|w| !wires.contains(w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_follow_given_order() {
        // wires (2, 0) on 3 qubits: local bit 1 -> wire 2 (value 1), local bit 0 -> wire 0 (value 4)
        assert_eq!(local_offsets(&[2, 0], 3), vec![0, 4, 1, 5]);
        assert_eq!(local_offsets(&[0], 2), vec![0, 2]);
    }

    #[test]
    fn wire_validation() {
        assert_eq!(check_wires(&[], 3), Err(Error::EmptyWireList));
        assert_eq!(check_wires(&[0, 0], 3), Err(Error::DuplicateWire(0)));
        assert_eq!(check_wires(&[3], 3), Err(Error::WireOutOfRange { wire: 3, n_wires: 3 }));
        assert!(check_wires(&[2, 0, 1], 3).is_ok());
    }

    #[test]
    fn register_cap() {
        assert_eq!(qubits_for_len(1 << 12), Ok(12));
        assert_eq!(qubits_for_len(1 << 13), Err(Error::RegisterTooLarge(13)));
        assert_eq!(qubits_for_len(6), Err(Error::NotPowerOfTwo(6)));
    }
}
