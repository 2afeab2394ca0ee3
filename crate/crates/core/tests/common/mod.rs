//! Generators and brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use mtekit::alignment::{AlignmentGroup, AlignmentLink};
use rand::Rng;

pub const HUB: &str = "hub.xml";

/// A sentence qualified by its document.
pub type Node = (String, String);
pub type Partition = BTreeSet<BTreeSet<Node>>;

/// A monotone alignment of `hub` sentences to fresh sentences of `doc`:
/// hub chunks of 1-3 sentences aligned to 1-3 sentences, with about one
/// chunk in ten left out or aligned to nothing, and occasional 0:n links.
pub fn random_group(rng: &mut impl Rng, hub: &[String], doc: &str) -> AlignmentGroup {
    let mut group = AlignmentGroup::new(vec![HUB.to_string(), doc.to_string()]);
    let mut next = 1;
    let mut fresh = |k: usize| -> Vec<String> {
        (0..k)
            .map(|_| {
                next += 1;
                format!("{doc}.{}", next - 1)
            })
            .collect()
    };
    let mut i = 0;
    while i < hub.len() {
        let m = rng.gen_range(1..=3).min(hub.len() - i);
        let chunk = hub[i..i + m].to_vec();
        i += m;
        let r: f64 = rng.gen();
        if r < 0.05 {
            continue;
        } else if r < 0.10 {
            group.links.push(AlignmentLink::new(vec![chunk, Vec::new()]));
        } else {
            let k = rng.gen_range(1..=3);
            group.links.push(AlignmentLink::new(vec![chunk, fresh(k)]));
        }
        if rng.gen::<f64>() < 0.05 {
            let k = rng.gen_range(1..=3);
            group.links.push(AlignmentLink::new(vec![Vec::new(), fresh(k)]));
        }
    }
    group.sort_links();
    group
}

pub fn hub_sentences(rng: &mut impl Rng, max: usize) -> Vec<String> {
    let n = rng.gen_range(1..=max);
    (1..=n).map(|k| format!("h.{k}")).collect()
}

/// Sentences of one link, qualified by document.
pub fn link_nodes(group: &AlignmentGroup, link: &AlignmentLink) -> BTreeSet<Node> {
    group
        .documents
        .iter()
        .zip(&link.targets)
        .flat_map(|(doc, ids)| ids.iter().map(move |id| (doc.clone(), id.clone())))
        .collect()
}

/// Connected components of the graph joining all sentences of each source
/// link, by repeated merging of overlapping sets until nothing changes.
pub fn closure(groups: &[&AlignmentGroup]) -> Partition {
    let mut sets: Vec<BTreeSet<Node>> = groups
        .iter()
        .flat_map(|g| g.links.iter().map(|l| link_nodes(g, l)))
        .collect();
    loop {
        let mut merged = false;
        'outer: for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if !sets[i].is_disjoint(&sets[j]) {
                    let other = sets.remove(j);
                    sets[i].extend(other);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    sets.into_iter().collect()
}

/// The closure with hub sentences removed, empty blocks dropped.
pub fn closure_without_hub(groups: &[&AlignmentGroup]) -> Partition {
    closure(groups)
        .into_iter()
        .map(|b| b.into_iter().filter(|(d, _)| d != HUB).collect::<BTreeSet<_>>())
        .filter(|b| !b.is_empty())
        .collect()
}

pub fn partition_of(group: &AlignmentGroup) -> Partition {
    group.links.iter().map(|l| link_nodes(group, l)).collect()
}

/// Whether `block` can be cut in two without cutting any of `links`.
/// Exhaustive over two-colourings for small blocks; larger blocks are
/// checked for connectivity of the links covering them.
pub fn splittable(block: &BTreeSet<Node>, links: &[BTreeSet<Node>]) -> bool {
    let inside: Vec<&BTreeSet<Node>> = links.iter().filter(|l| l.is_subset(block)).collect();
    let nodes: Vec<&Node> = block.iter().collect();
    if nodes.len() <= 16 {
        let index = |n: &Node| nodes.iter().position(|m| *m == n).unwrap();
        let inside_idx: Vec<Vec<usize>> = inside.iter().map(|l| l.iter().map(index).collect()).collect();
        // node 0 is always colour 0; mask bit k is the colour of node k+1
        for mask in 1u32..(1 << (nodes.len() - 1)) {
            let colour = |k: usize| k > 0 && mask & (1 << (k - 1)) != 0;
            if inside_idx.iter().all(|l| l.iter().all(|&k| colour(k) == colour(l[0]))) {
                return true;
            }
        }
        return false;
    }
    let mut reached = vec![false; inside.len()];
    let mut queue = VecDeque::from([0]);
    reached[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..inside.len() {
            if !reached[j] && !inside[i].is_disjoint(inside[j]) {
                reached[j] = true;
                queue.push_back(j);
            }
        }
    }
    let covered: BTreeSet<&Node> = inside
        .iter()
        .zip(&reached)
        .filter(|(_, r)| **r)
        .flat_map(|(l, _)| l.iter())
        .collect();
    covered.len() != block.len()
}
