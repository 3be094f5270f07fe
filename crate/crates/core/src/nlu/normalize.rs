use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Folds free text into a sequence of comparison tokens.
///
/// The text is lowercased, canonically decomposed and stripped of combining
/// marks (so `á` becomes `a` and `ñ` becomes `n`). Every character that is not
/// alphanumeric acts as a separator, which removes punctuation such as `¿` and
/// `¡`. The result is idempotent: normalizing the space-joined output again
/// returns the same tokens.
pub fn normalize(text: &str) -> Vec<String> {
    let folded: String = text
        .to_lowercase()
        .nfd()
        .filter(|c| !is_combining_mark(*c))
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    folded.split_whitespace().map(str::to_owned).collect()
}

/// Normalized tokens joined with single spaces.
pub fn normalize_joined(text: &str) -> String {
    normalize(text).join(" ")
}
