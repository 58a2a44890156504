//! Small shared helpers: parity signs and index combinatorics.

use num_traits::One;

use crate::Rational;

/// (-1)^e as an i32, for possibly negative exponents.
pub(crate) fn parity(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// (-1)^e as an exact rational.
pub(crate) fn parity_rat(e: i64) -> Rational {
    let one: Rational = One::one();
    if parity(e) == 1 {
        one
    } else {
        -one
    }
}

/// All strictly increasing k-subsets of 1..=n, in lexicographic order.
pub(crate) fn increasing_subsets(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<u8> = (1..=k as u8).collect();
    loop {
        out.push(current.clone());
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < (n - (k - 1 - i)) as u8 {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_handles_negative_exponents() {
        assert_eq!(parity(0), 1);
        assert_eq!(parity(-1), -1);
        assert_eq!(parity(-2), 1);
        assert_eq!(parity(3), -1);
    }

    #[test]
    fn subsets_enumerate_in_lex_order() {
        let s = increasing_subsets(4, 2);
        assert_eq!(
            s,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        assert_eq!(increasing_subsets(7, 3).len(), 35);
        assert_eq!(increasing_subsets(3, 0), vec![Vec::<u8>::new()]);
        assert!(increasing_subsets(2, 3).is_empty());
    }
}
