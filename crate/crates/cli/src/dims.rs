/// Parses `A..B` (inclusive) or a comma-separated list.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    let num = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad dimension `{x}`: {e}"))
    };
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty dimension range {a}..{b}"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}
