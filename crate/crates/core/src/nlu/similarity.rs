/// Levenshtein distance over Unicode scalar values.
pub fn edit_distance(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    if b.len() < STACK_ROW {
        let mut prev = [0usize; STACK_ROW];
        let mut curr = [0usize; STACK_ROW];
        rows(a, b, &mut prev[..=b.len()], &mut curr[..=b.len()])
    } else {
        let mut prev = vec![0; b.len() + 1];
        let mut curr = vec![0; b.len() + 1];
        rows(a, b, &mut prev, &mut curr)
    }
}

const STACK_ROW: usize = 64;

fn rows<'r>(a: &[char], b: &[char], mut prev: &'r mut [usize], mut curr: &'r mut [usize]) -> usize {
    for (j, cell) in prev.iter_mut().enumerate() {
        *cell = j;
    }
    for (i, ca) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let substitution = prev[j] + usize::from(ca != cb);
            curr[j + 1] = substitution.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// Levenshtein distance if it is at most `k`, computed on a diagonal band of
/// width `2k + 1` and abandoned as soon as every cell in a row exceeds `k`.
pub(crate) fn edit_distance_within(a: &[char], b: &[char], k: usize) -> Option<usize> {
    if a.len().abs_diff(b.len()) > k {
        return None;
    }
    if a.is_empty() || b.is_empty() {
        return Some(a.len().max(b.len()));
    }
    if b.len() < STACK_ROW {
        let mut prev = [0usize; STACK_ROW];
        let mut curr = [0usize; STACK_ROW];
        band(a, b, k, &mut prev[..=b.len()], &mut curr[..=b.len()])
    } else {
        let mut prev = vec![0; b.len() + 1];
        let mut curr = vec![0; b.len() + 1];
        band(a, b, k, &mut prev, &mut curr)
    }
}

fn band<'r>(
    a: &[char],
    b: &[char],
    k: usize,
    mut prev: &'r mut [usize],
    mut curr: &'r mut [usize],
) -> Option<usize> {
    let inf = k + 1;
    let w = b.len();
    for (j, cell) in prev.iter_mut().enumerate() {
        *cell = if j <= k { j } else { inf };
    }
    for i in 1..=a.len() {
        let lo = i.saturating_sub(k).max(1);
        let hi = (i + k).min(w);
        curr[lo - 1] = if lo == 1 && i <= k { i } else { inf };
        let mut row_min = curr[lo - 1];
        for j in lo..=hi {
            let substitution = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            let v = substitution.min(prev[j] + 1).min(curr[j - 1] + 1).min(inf);
            curr[j] = v;
            row_min = row_min.min(v);
        }
        if hi < w {
            curr[hi + 1] = inf;
        }
        if row_min > k {
            return None;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    let d = prev[w];
    (d <= k).then_some(d)
}

/// `char_similarity` when it is at least `floor`; `None` when it is
/// certainly below.
pub(crate) fn char_similarity_above(a: &[char], b: &[char], floor: f64) -> Option<f64> {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return Some(1.0);
    }
    let k = if floor <= 0.0 {
        longest
    } else {
        (((1.0 - floor) * longest as f64).floor() as usize + 1).min(longest)
    };
    edit_distance_within(a, b, k).map(|d| 1.0 - d as f64 / longest as f64)
}

pub(crate) fn char_similarity(a: &[char], b: &[char]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - edit_distance(a, b) as f64 / longest as f64
}

const BUCKETS: usize = 38;

fn bucket(c: char) -> usize {
    match c {
        'a'..='z' => c as usize - 'a' as usize,
        '0'..='9' => 26 + c as usize - '0' as usize,
        ' ' => 36,
        _ => 37,
    }
}

/// A normalized string with its character histogram, which gives a cheap
/// lower bound on edit distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Term {
    pub chars: Vec<char>,
    counts: [u16; BUCKETS],
}

impl Term {
    pub(crate) fn new(text: &str) -> Term {
        let chars: Vec<char> = text.chars().collect();
        let mut counts = [0u16; BUCKETS];
        for &c in &chars {
            let slot = &mut counts[bucket(c)];
            *slot = slot.saturating_add(1);
        }
        Term { chars, counts }
    }

    pub(crate) fn len(&self) -> usize {
        self.chars.len()
    }

    /// Upper bound on `char_similarity(self, other)`. Every insertion or
    /// deletion moves the length gap and the histogram gap by one, every
    /// substitution moves the histogram gap by at most two, so
    /// `lev >= (hist_gap + len_gap) / 2`.
    pub(crate) fn similarity_bound(&self, other: &Term) -> f64 {
        let longest = self.len().max(other.len());
        if longest == 0 {
            return 1.0;
        }
        let hist_gap: usize = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(&x, &y)| x.abs_diff(y) as usize)
            .sum();
        let lower = (hist_gap + self.len().abs_diff(other.len())).div_ceil(2);
        1.0 - lower as f64 / longest as f64
    }
}

/// Normalized edit similarity `1 - lev(a, b) / max(|a|, |b|)`, in `[0, 1]`.
///
/// Two empty tokens are fully similar.
pub fn token_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    char_similarity(&a, &b)
}
