//! Level-ordered formula trees.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::syntax::{Formula, Kind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub formula: Formula,
    pub kind: Kind,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
}

/// Leaves that share one atomic evaluation per step. `label == None` groups
/// the `true` literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafGroup {
    pub label: Option<String>,
    pub leaves: Vec<usize>,
}

/// A formula tree in breadth-first order: node 0 is the whole formula and
/// every level precedes the next, siblings left to right.
///
/// Repeated subformulas are separate nodes with their own vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaTree {
    nodes: Vec<TreeNode>,
    leaf_groups: Vec<LeafGroup>,
    schedule: Vec<usize>,
}

impl FormulaTree {
    pub fn build(formula: &Formula) -> Self {
        let mut nodes: Vec<TreeNode> = Vec::new();
        let mut queue: VecDeque<(&Formula, Option<usize>, usize)> = VecDeque::new();
        queue.push_back((formula, None, 0usize));
        while let Some((f, parent, depth)) = queue.pop_front() {
            let index = nodes.len();
            if let Some(p) = parent {
                nodes[p].children.push(index);
            }
            nodes.push(TreeNode {
                formula: f.clone(),
                kind: f.kind(),
                parent,
                children: Vec::with_capacity(f.kind().arity()),
                depth,
            });
            for arg in f.arguments() {
                queue.push_back((arg, Some(index), depth + 1));
            }
        }

        let mut leaf_groups: Vec<LeafGroup> = Vec::new();
        for (i, node) in nodes.iter().enumerate() {
            if !node.children.is_empty() {
                continue;
            }
            let label = node.formula.atom_name().map(String::from);
            match leaf_groups.iter_mut().find(|g| g.label == label) {
                Some(group) => group.leaves.push(i),
                None => leaf_groups.push(LeafGroup {
                    label,
                    leaves: vec![i],
                }),
            }
        }

        let schedule = promotion_schedule(&nodes);
        FormulaTree {
            nodes,
            leaf_groups,
            schedule,
        }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &TreeNode {
        &self.nodes[index]
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Height `L`, root at level 0.
    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn leaf_groups(&self) -> &[LeafGroup] {
        &self.leaf_groups
    }

    /// Non-leaf nodes in the order their modules run within a step. Every
    /// node appears after all of its children.
    pub fn schedule(&self) -> &[usize] {
        &self.schedule
    }
}

/// Walk up from each leaf in BFS order, promoting a parent as soon as all of
/// its children are done; stop at the first parent still waiting.
fn promotion_schedule(nodes: &[TreeNode]) -> Vec<usize> {
    let mut done: Vec<bool> = nodes.iter().map(|n| n.children.is_empty()).collect();
    let mut order = Vec::new();
    let leaves: Vec<usize> = (0..nodes.len()).filter(|&i| done[i]).collect();
    while !done[0] {
        for &leaf in &leaves {
            let mut current = leaf;
            while let Some(parent) = nodes[current].parent {
                if done[parent] || !nodes[parent].children.iter().all(|&c| done[c]) {
                    break;
                }
                done[parent] = true;
                order.push(parent);
                current = parent;
            }
        }
    }
    order
}
