//! Sweep-and-prune candidate generation along the x axis.

use std::collections::BTreeSet;

use super::filter::{interacts, CollisionFilter};
use super::shape::Aabb;
use crate::scalar::Scalar;
use crate::scenegraph::NodeId;

#[derive(Debug, Clone, Copy)]
pub struct Proxy<T> {
    pub id: NodeId,
    pub aabb: Aabb<T>,
    pub filter: CollisionFilter,
}

/// Normalised pair, smaller id first.
pub fn ordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// All filter-passing pairs whose boxes overlap.
pub fn sweep_and_prune<T: Scalar>(proxies: &[Proxy<T>]) -> BTreeSet<(NodeId, NodeId)> {
    let mut order: Vec<usize> = (0..proxies.len()).collect();
    order.sort_by(|&i, &j| {
        proxies[i]
            .aabb
            .min
            .x
            .partial_cmp(&proxies[j].aabb.min.x)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(proxies[i].id.cmp(&proxies[j].id))
    });

    let mut pairs = BTreeSet::new();
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let p = &proxies[i];
        active.retain(|&j| proxies[j].aabb.max.x >= p.aabb.min.x);
        for &j in &active {
            let q = &proxies[j];
            if interacts(&p.filter, &q.filter) && p.aabb.overlaps(&q.aabb) {
                pairs.insert(ordered(p.id, q.id));
            }
        }
        active.push(i);
    }
    pairs
}
