/// Accepts the subset of the DOT language the exporter writes: a `digraph`
/// header, node statements, edge statements with attribute lists, and `}`.
pub fn check_dot(text: &str) -> Result<(usize, usize), String> {
    let mut lines = text.lines();
    let head = lines.next().ok_or("empty")?;
    if !head.starts_with("digraph ") || !head.ends_with(" {") {
        return Err(format!("bad header {head:?}"));
    }
    let quoted = |s: &str| -> Option<usize> {
        let rest = s.strip_prefix('"')?;
        let end = rest.find('"')?;
        rest[..end]
            .bytes()
            .all(|b| b.is_ascii_digit())
            .then_some(end + 2)
    };
    let attrs = |s: &str| -> bool {
        let Some(body) = s.strip_prefix(" [").and_then(|s| s.strip_suffix("];")) else {
            return false;
        };
        body.split(", ").all(|kv| {
            let Some((k, v)) = kv.split_once('=') else {
                return false;
            };
            k.bytes().all(|b| b.is_ascii_lowercase())
                && (v.bytes().all(|b| b.is_ascii_alphanumeric())
                    || (v.len() >= 2
                        && v.starts_with('"')
                        && v.ends_with('"')
                        && !v[1..v.len() - 1].contains('"')))
        })
    };
    let (mut nodes, mut edges, mut closed) = (0, 0, false);
    for line in lines {
        if closed {
            return Err("content after closing brace".into());
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let s = line
            .strip_prefix("  ")
            .ok_or(format!("bad indent {line:?}"))?;
        let a = quoted(s).ok_or(format!("bad id {line:?}"))?;
        let rest = &s[a..];
        let rest = match rest.strip_prefix(" -> ") {
            Some(r) => {
                let b = quoted(r).ok_or(format!("bad target {line:?}"))?;
                edges += 1;
                &r[b..]
            }
            None => {
                nodes += 1;
                rest
            }
        };
        if !attrs(rest) {
            return Err(format!("bad attributes {line:?}"));
        }
    }
    if !closed {
        return Err("missing closing brace".into());
    }
    Ok((nodes, edges))
}
