use graph_core::{ApspTable, Dist, FailureSet, Graph, VertexId, INF};

use crate::certificate::PathWalk;
use crate::trapezoid::within;
use crate::{replacement_matrix, OracleError};

/// Shortest ℓ-decomposable simple u-v path in `G - F` whose `eps/9`
/// trapezoid avoids every failed-edge endpoint, or `INF` if none exists.
/// Fails rather than truncating once `budget` search nodes are spent.
#[allow(clippy::too_many_arguments)]
pub fn brute_faraway_decomposable(
    g: &Graph,
    apsp: &ApspTable,
    u: VertexId,
    v: VertexId,
    f: &FailureSet,
    ell: usize,
    eps: f64,
    budget: u64,
) -> Result<Dist, OracleError> {
    if u == v {
        return Ok(0);
    }
    let n = g.n();
    let dist = replacement_matrix(g, f);
    let d = |x: VertexId, y: VertexId| dist[x as usize * n + y as usize];
    if d(u, v) == INF {
        return Ok(INF);
    }
    let marks: Vec<VertexId> = f.endpoints().iter().copied().filter(|&z| z != u && z != v).collect();
    // Certain violation for every completion of total length >= `total`.
    let violated = |path: &[VertexId], pre: &[Dist], total: Dist| {
        path.iter().zip(pre).any(|(&y, &a)| {
            let m = a.min(total.saturating_sub(a));
            marks.iter().any(|&z| within(d(y, z), m, eps))
        })
    };

    let mut best = INF;
    let mut on = vec![false; n];
    let mut walk = PathWalk::new(apsp, u);
    let mut pre: Vec<Dist> = vec![0];
    let mut stack = vec![0usize];
    on[u as usize] = true;
    let mut nodes = 0u64;
    while let Some(top) = stack.last_mut() {
        let x = walk.end();
        let adj = g.neighbors(x);
        if *top == adj.len() {
            stack.pop();
            on[x as usize] = false;
            if !stack.is_empty() {
                walk.pop();
                pre.pop();
            }
            continue;
        }
        let next = adj[*top];
        *top += 1;
        if on[next.to as usize] || f.contains(next.edge) {
            continue;
        }
        let len = pre.last().unwrap() + next.weight as Dist;
        let rest = d(next.to, v);
        if rest == INF || len + rest >= best {
            continue;
        }
        nodes += 1;
        if nodes > budget {
            return Err(OracleError::BudgetExceeded(budget));
        }
        walk.push(next.to);
        pre.push(len);
        if walk.transitions() > ell || violated(walk.vertices(), &pre, len + rest) {
            walk.pop();
            pre.pop();
            continue;
        }
        if next.to == v {
            // `rest` is zero here, so the check above used the exact total.
            best = len;
            walk.pop();
            pre.pop();
            continue;
        }
        on[next.to as usize] = true;
        stack.push(0);
    }
    Ok(best)
}
