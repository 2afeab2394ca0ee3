//! Hierarchical dotted identifiers such as `Osl.1.2.2.1`.

use std::cmp::Ordering;

/// Compares identifiers segment by segment: numeric segments numerically,
/// others as strings, a proper prefix before its extensions.
///
/// ```
/// use std::cmp::Ordering;
/// use mtekit::ids::compare_dotted;
///
/// assert_eq!(compare_dotted("Osl.1.2.10", "Osl.1.2.9"), Ordering::Greater);
/// assert_eq!(compare_dotted("Osl.1.2", "Osl.1.2.1"), Ordering::Less);
/// ```
pub fn compare_dotted(a: &str, b: &str) -> Ordering {
    let mut xs = a.split('.');
    let mut ys = b.split('.');
    loop {
        match (xs.next(), ys.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) => {
                let ord = compare_segment(x, y);
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

fn compare_segment(x: &str, y: &str) -> Ordering {
    let numeric = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if numeric(x) && numeric(y) {
        let x = x.trim_start_matches('0');
        let y = y.trim_start_matches('0');
        // compare as numbers of arbitrary length
        x.len().cmp(&y.len()).then_with(|| x.cmp(y))
    } else {
        x.cmp(y)
    }
}

/// Whether `child` extends `parent` by at least one dotted segment.
///
/// `Osl.` is the parent of `Osl.1`; `Osl.1` of `Osl.1.2` but not of
/// `Osl.12`.
pub fn extends(parent: &str, child: &str) -> bool {
    let Some(rest) = child.strip_prefix(parent) else {
        return false;
    };
    if rest.is_empty() {
        return false;
    }
    parent.ends_with('.') || rest.starts_with('.')
}

/// An identifier is usable when it is non-empty and has no whitespace.
pub fn is_well_formed(id: &str) -> bool {
    !id.is_empty() && !id.chars().any(char::is_whitespace)
}
