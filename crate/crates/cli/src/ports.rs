use std::collections::BTreeMap;

use mcsort::Trit;

/// Folds outputs named `base_idx` into one word per `base`, bits ordered by
/// index. Other outputs stand alone. Groups keep first-appearance order.
pub fn group_outputs<'a, I>(outputs: I) -> Vec<(String, String)>
where
    I: IntoIterator<Item = (&'a String, &'a Trit)>,
{
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, BTreeMap<usize, Trit>> = BTreeMap::new();
    let mut single: BTreeMap<String, Trit> = BTreeMap::new();
    for (name, &t) in outputs {
        let split = name
            .rsplit_once('_')
            .and_then(|(base, idx)| Some((base, idx.parse::<usize>().ok()?)))
            .filter(|(base, _)| !base.is_empty());
        let key = match split {
            Some((base, idx)) => {
                groups.entry(base.to_string()).or_default().insert(idx, t);
                base.to_string()
            }
            None => {
                single.insert(name.clone(), t);
                name.clone()
            }
        };
        if !order.contains(&key) {
            order.push(key);
        }
    }
    order
        .into_iter()
        .map(|k| {
            let word = match groups.get(&k) {
                Some(bits) => bits.values().map(|t| t.to_char()).collect(),
                None => single[&k].to_char().to_string(),
            };
            (k, word)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_by_prefix_and_index() {
        let outs: Vec<(String, Trit)> = vec![
            ("max_2".into(), Trit::Meta),
            ("max_1".into(), Trit::Zero),
            ("min_1".into(), Trit::One),
            ("min_2".into(), Trit::Zero),
            ("flag".into(), Trit::One),
        ];
        let g = group_outputs(outs.iter().map(|(a, b)| (a, b)));
        assert_eq!(
            g,
            vec![
                ("max".to_string(), "0M".to_string()),
                ("min".to_string(), "10".to_string()),
                ("flag".to_string(), "1".to_string()),
            ]
        );
    }
}
