use serde_json::{json, Value};

use hypwalk::building::{
    all_flags, canonicalize, cat0_distance, certificate_report, displacement_profile, germ_flag, neighbours, vector_distance,
    Flag, Germ, LatticeClass, LaurentMatrix,
};
use hypwalk::tree_flats::{chain_metric_dl, find_skewering, longest_l_chain, word_distance, GroupWord};

use crate::config::usage;

/// Text lines for the terminal and the same content as JSON.
pub struct Output {
    pub lines: Vec<String>,
    pub json: Value,
}

pub fn parse_word(s: &str) -> anyhow::Result<GroupWord> {
    s.parse().map_err(|e| usage(format!("cannot parse word '{s}': {e}")))
}

pub fn parse_matrix(s: &str, q: u32) -> anyhow::Result<LaurentMatrix> {
    LaurentMatrix::parse(s, q).map_err(|e| usage(format!("cannot parse matrix '{s}': {e}")))
}

fn parse_class(s: &str, q: u32) -> anyhow::Result<LatticeClass> {
    canonicalize(&parse_matrix(s, q)?).map_err(|e| usage(format!("'{s}' is not a lattice basis: {e}")))
}

pub fn certify_tree(element: &str, level: u32, max_power: u32) -> anyhow::Result<Output> {
    let g = parse_word(element)?;
    let witness = if g.is_identity() { None } else { find_skewering(&g, level, max_power)? };
    let profile: Vec<u64> = (1..=8).map(|k| g.power(k).length()).collect();
    let mut lines = vec![format!("element: {g}"), format!("contracting: {}", witness.is_some())];
    if let Some(w) = &witness {
        lines.push(format!("witness: {} is mapped by g^{} to {}", w.wall, w.power, w.image));
    }
    lines.push(format!("displacement profile |g^k|, k = 1..8: {profile:?}"));
    let json = json!({
        "backend": "tree_flats",
        "element": g.to_string(),
        "level": level,
        "max_power": max_power,
        "contracting": witness.is_some(),
        "witness": witness.map(|w| json!({"wall": w.wall.to_string(), "power": w.power, "image": w.image.to_string()})),
        "displacement_profile": profile,
    });
    Ok(Output { lines, json })
}

pub fn certify_building(element: &str, q: u32) -> anyhow::Result<Output> {
    let g = parse_matrix(element, q)?;
    if !g.is_sl3() {
        return Err(usage(format!("'{element}' is not in SL3 over F_{q}")));
    }
    let o = LatticeClass::standard(q);
    let r = certificate_report(&g, &o)?;
    let profile = displacement_profile(&g, &o, 8)?;
    let flag = |id: Option<usize>| id.map(|i| Flag::from_id(q, i).map(|f| f.to_string()).unwrap_or_default());
    let mut lines = vec![
        format!("element: {g}"),
        format!("hyperbolic: {}", r.certified),
        format!("forward: vector distance {} germ {}", r.forward, flag(r.forward_flag).unwrap_or_else(|| "none".into())),
        format!("backward: vector distance {} germ {}", r.backward, flag(r.backward_flag).unwrap_or_else(|| "none".into())),
    ];
    let rounded: Vec<String> = profile.iter().map(|d| format!("{d:.4}")).collect();
    lines.push(format!("displacement profile d(o, g^k o), k = 1..8: [{}]", rounded.join(", ")));
    let json = json!({
        "backend": "building_sl3",
        "q": q,
        "element": g.to_string(),
        "hyperbolic": r.certified,
        "forward": {"vector_distance": [r.forward.a, r.forward.b], "flag_id": r.forward_flag, "flag": flag(r.forward_flag)},
        "backward": {"vector_distance": [r.backward.a, r.backward.b], "flag_id": r.backward_flag, "flag": flag(r.backward_flag)},
        "displacement_profile": profile,
    });
    Ok(Output { lines, json })
}

pub fn dl(x: &str, y: &str, level: u32) -> anyhow::Result<Output> {
    let (x, y) = (parse_word(x)?, parse_word(y)?);
    let d = word_distance(&x, &y);
    let dl = chain_metric_dl(&x, &y, level);
    let chain = if x == y { Vec::new() } else { longest_l_chain(&x, &y, level).walls };
    let walls: Vec<String> = chain.iter().map(ToString::to_string).collect();
    let lines = vec![
        format!("x = {x}, y = {y}, L = {level}"),
        format!("d = {d}"),
        format!("d_{level} = {dl}"),
        format!("chain: [{}]", walls.join(", ")),
    ];
    let json = json!({"x": x.to_string(), "y": y.to_string(), "level": level, "word_distance": d, "chain_distance": dl, "chain": walls});
    Ok(Output { lines, json })
}

pub fn building_info(q: u32) -> anyhow::Result<Output> {
    if !hypwalk::building::poly::is_prime(q) {
        return Err(usage(format!("q: {q} is not prime")));
    }
    let points = (q * q + q + 1) as usize;
    let flags = all_flags(q);
    let valency = neighbours(&LatticeClass::standard(q)).len();
    let mut lines = vec![
        format!("q = {q}"),
        format!("residue: {points} points, {points} lines, {} flags, {} opposite flags each", flags.len(), q.pow(3)),
        format!("vertex valency: {valency}"),
        "flag ids (lexicographic on normalised point, then line normal):".to_string(),
    ];
    lines.extend(flags.iter().enumerate().map(|(i, f)| format!("  {i:>3}  {f}")));
    let json = json!({
        "q": q,
        "points": points,
        "flags": flags.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "opposite_per_flag": q.pow(3),
        "valency": valency,
    });
    Ok(Output { lines, json })
}

pub fn building_distance(x: &str, y: &str, q: u32) -> anyhow::Result<Output> {
    let (x, y) = (parse_class(x, q)?, parse_class(y, q)?);
    let v = vector_distance(&x, &y);
    let d = cat0_distance(&x, &y);
    let lines = vec![
        format!("x = {x} (type {}), y = {y} (type {})", x.vertex_type(), y.vertex_type()),
        format!("vector distance {v}, regular: {}", v.is_regular()),
        format!("distance {d:.12}"),
    ];
    let json = json!({"x": x.to_string(), "y": y.to_string(), "vector_distance": [v.a, v.b], "regular": v.is_regular(), "distance": d});
    Ok(Output { lines, json })
}

pub fn building_germ(x: &str, y: &str, q: u32) -> anyhow::Result<Output> {
    let (x, y) = (parse_class(x, q)?, parse_class(y, q)?);
    let germ = germ_flag(&x, &y).map_err(|e| usage(e.to_string()))?;
    let (kind, text, id) = match &germ {
        Germ::Chamber(f) => ("chamber", f.to_string(), Some(f.id())),
        Germ::Point(p) => ("point", format!("{p:?}"), None),
        Germ::Line(n) => ("line", format!("normal {n:?}"), None),
    };
    let mut lines = vec![format!("germ at {x} towards {y}: {kind} {text}")];
    if let Some(i) = id {
        lines.push(format!("flag id {i}"));
    }
    Ok(Output { lines, json: json!({"x": x.to_string(), "y": y.to_string(), "kind": kind, "germ": text, "flag_id": id}) })
}
