use super::StatError;
use crate::scoring::MAX_TOTAL;

pub const SCORE_BINS: usize = MAX_TOTAL as usize + 1;

/// Counts of each total score 0..=27.
pub fn score_histogram(scores: &[u8]) -> Result<[u32; SCORE_BINS], StatError> {
    let mut bins = [0u32; SCORE_BINS];
    for &s in scores {
        *bins.get_mut(usize::from(s)).ok_or(StatError::OutOfRange)? += 1;
    }
    Ok(bins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixed_values() {
        assert_eq!(score_histogram(&[]).unwrap(), [0; SCORE_BINS]);
        let h = score_histogram(&[0, 0, 27]).unwrap();
        assert_eq!((h[0], h[27]), (2, 1));
        assert_eq!(h.iter().sum::<u32>(), 3);
        assert_eq!(score_histogram(&[28]), Err(StatError::OutOfRange));
    }

    proptest! {
        #[test]
        fn counts_sum_to_n(scores in prop::collection::vec(0u8..=27, 0..200)) {
            let h = score_histogram(&scores).unwrap();
            prop_assert_eq!(h.iter().sum::<u32>() as usize, scores.len());
        }
    }
}
