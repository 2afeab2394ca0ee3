use std::collections::{BTreeMap, HashMap, HashSet};

use petgraph::unionfind::UnionFind;

use super::{AlignmentGroup, AlignmentLink};
use crate::ids::compare_dotted;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComposeError {
    #[error("no alignment groups given")]
    NoGroups,
    #[error("the groups share no document")]
    NoHub,
    #[error("more than one document could be the hub: {}", .0.join(", "))]
    AmbiguousHub(Vec<String>),
    #[error("group {group} does not contain the hub document `{hub}`")]
    MissingHub { group: usize, hub: String },
    #[error("hub sentence `{id}` is in more than one link of group {group}")]
    DuplicateHubSentence { group: usize, id: String },
    #[error("document `{0}` is aligned to the hub by more than one group")]
    SharedDocument(String),
}

/// The single document all groups have in common.
pub fn find_hub(groups: &[&AlignmentGroup]) -> Result<String, ComposeError> {
    let (first, rest) = groups.split_first().ok_or(ComposeError::NoGroups)?;
    let shared: Vec<String> = first
        .documents
        .iter()
        .filter(|d| rest.iter().all(|g| g.documents.contains(d)))
        .cloned()
        .collect();
    match shared.len() {
        0 => Err(ComposeError::NoHub),
        1 => Ok(shared.into_iter().next().unwrap_or_default()),
        _ => Err(ComposeError::AmbiguousHub(shared)),
    }
}

/// Composes `hub_to_x` and `hub_to_y` into an `x`-`y` alignment. The hub is
/// the document both groups share.
pub fn compose(hub_to_x: &AlignmentGroup, hub_to_y: &AlignmentGroup) -> Result<AlignmentGroup, ComposeError> {
    let groups = [hub_to_x, hub_to_y];
    let hub = find_hub(&groups)?;
    compose_around(&groups, &hub, false)
}

/// Composes any number of hub alignments into one multi-slot group.
pub fn compose_multiway(groups: &[&AlignmentGroup], include_hub: bool) -> Result<AlignmentGroup, ComposeError> {
    let hub = find_hub(groups)?;
    compose_around(groups, &hub, include_hub)
}

/// Merges links of all groups that share a hub sentence, transitively, and
/// turns each resulting block into one link over the non-hub documents (the
/// hub first when `include_hub`). This is the finest grouping in which every
/// source link stays within one block. Blocks missing a side become
/// null-links; blocks with no sentence in any output slot are dropped.
pub fn compose_around(
    groups: &[&AlignmentGroup],
    hub: &str,
    include_hub: bool,
) -> Result<AlignmentGroup, ComposeError> {
    if groups.is_empty() {
        return Err(ComposeError::NoGroups);
    }
    let mut documents: Vec<String> = Vec::new();
    if include_hub {
        documents.push(hub.to_string());
    }
    // per group: hub slot and the output slot of each of its slots
    let mut layouts = Vec::new();
    for (gi, group) in groups.iter().enumerate() {
        let hub_slot = group.slot_of(hub).ok_or_else(|| ComposeError::MissingHub {
            group: gi,
            hub: hub.to_string(),
        })?;
        let mut out_slots = Vec::new();
        for (slot, doc) in group.documents.iter().enumerate() {
            if slot == hub_slot {
                out_slots.push(include_hub.then_some(0));
                continue;
            }
            if documents.contains(doc) {
                return Err(ComposeError::SharedDocument(doc.clone()));
            }
            documents.push(doc.clone());
            out_slots.push(Some(documents.len() - 1));
        }
        layouts.push((hub_slot, out_slots));
    }

    let links: Vec<(usize, &AlignmentLink)> = groups
        .iter()
        .enumerate()
        .flat_map(|(gi, g)| g.links.iter().map(move |l| (gi, l)))
        .collect();
    let mut blocks = UnionFind::<usize>::new(links.len());
    let mut holder: HashMap<&str, usize> = HashMap::new();
    let mut seen: HashSet<(usize, &str)> = HashSet::new();
    for (li, (gi, link)) in links.iter().enumerate() {
        for id in &link.targets[layouts[*gi].0] {
            if !seen.insert((*gi, id.as_str())) {
                return Err(ComposeError::DuplicateHubSentence {
                    group: *gi,
                    id: id.clone(),
                });
            }
            match holder.get(id.as_str()) {
                Some(&other) => {
                    blocks.union(other, li);
                }
                None => {
                    holder.insert(id, li);
                }
            }
        }
    }

    let mut merged: BTreeMap<usize, Vec<Vec<String>>> = BTreeMap::new();
    for (li, (gi, link)) in links.iter().enumerate() {
        let slots = merged
            .entry(blocks.find(li))
            .or_insert_with(|| vec![Vec::new(); documents.len()]);
        for (slot, ids) in link.targets.iter().enumerate() {
            if let Some(out) = layouts[*gi].1[slot] {
                for id in ids {
                    if !slots[out].contains(id) {
                        slots[out].push(id.clone());
                    }
                }
            }
        }
    }

    let mut out = AlignmentGroup::new(documents);
    out.link_type = groups[0].link_type.clone();
    for (_, mut slots) in merged {
        if slots.iter().all(Vec::is_empty) {
            continue;
        }
        for ids in &mut slots {
            ids.sort_by(|a, b| compare_dotted(a, b));
        }
        out.links.push(AlignmentLink::new(slots));
    }
    out.sort_links();
    Ok(out)
}
