use alloc::{format, vec, vec::Vec};

use super::StepFuzzySet;
use crate::hyperspace::hausdorff;
use crate::{Error, Result};

/// Levels `0 = a_0 < a_1 < ... < a_N = 1` such that
/// `d_H(u_t, u_{a_{i+1}}) < eps` for every `t` in `(a_i, a_{i+1}]`.
///
/// The `a_i` are chosen among the breakpoints of `u`, merging brackets from
/// the top down for as long as the level sets stay within `eps` of the set at
/// the upper end. Since `u_0` is the lowest level set, `d_H(u_0, u_{a_1}) <
/// eps` holds as well.
pub fn stratify(u: &StepFuzzySet, eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0) {
        return Err(Error::invalid("eps", format!("{eps}")));
    }
    let (levels, sets) = (u.levels(), u.sets());
    let mut anchor = levels.len() - 1;
    let mut out = vec![1.0];
    for j in (0..anchor).rev() {
        if hausdorff(&sets[j], &sets[anchor])? >= eps {
            out.push(levels[j]);
            anchor = j;
        }
    }
    out.push(0.0);
    out.reverse();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::tests::fuzzy_on;
    use crate::hyperspace::CompactSet;
    use crate::space::{Point, Space};
    use proptest::prelude::*;

    fn circ(xs: &[f64]) -> CompactSet {
        CompactSet::new(&Space::Circle, xs.iter().map(|&x| Point::angle(x)).collect()).unwrap()
    }

    #[test]
    fn characteristic_is_one_bracket() {
        let chi = StepFuzzySet::characteristic(circ(&[0.1, 0.2]));
        assert_eq!(stratify(&chi, 0.01).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn merges_close_levels_only() {
        let u = StepFuzzySet::new(
            vec![0.3, 0.6, 1.0],
            vec![circ(&[0.0, 0.5, 0.55]), circ(&[0.0, 0.5]), circ(&[0.0])],
        )
        .unwrap();
        assert_eq!(stratify(&u, 0.1).unwrap(), vec![0.0, 0.6, 1.0]);
        assert_eq!(stratify(&u, 0.6).unwrap(), vec![0.0, 1.0]);
        assert!(stratify(&u, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn defining_inequality_holds(u in fuzzy_on(4), eps in 0.05f64..1.5) {
            let a = stratify(&u, eps).unwrap();
            prop_assert_eq!(a[0], 0.0);
            prop_assert_eq!(*a.last().unwrap(), 1.0);
            prop_assert!(a.windows(2).all(|w| w[0] < w[1]));
            let mut probes = u.levels().to_vec();
            probes.push(0.0);
            for t in probes {
                let i = a.partition_point(|&x| x < t).max(1);
                let top = u.level_set(a[i]).unwrap();
                prop_assert!(hausdorff(u.level_set(t).unwrap(), top).unwrap() < eps);
            }
        }
    }
}
