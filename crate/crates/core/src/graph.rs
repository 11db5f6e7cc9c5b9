//! Small directed-graph routines shared by the symbolic and numeric layers.

/// Strongly connected components of the graph on `0..n` with successor lists
/// `succ`, returned in topological order of the condensation (a component
/// only has edges into components that come after it).
///
/// Iterative Tarjan, so deep graphs do not overflow the stack.
pub fn strongly_connected(n: usize, succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0usize;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // (vertex, next successor position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }
    // Tarjan emits sinks first.
    components.reverse();
    components
}

/// Successor lists of the support of a square nonnegative matrix.
pub fn support(matrix: &[Vec<f64>]) -> Vec<Vec<usize>> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v > 0.0)
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

/// True iff the component has at least one internal edge.
pub fn is_nontrivial(component: &[usize], succ: &[Vec<usize>]) -> bool {
    component.len() > 1 || succ[component[0]].contains(&component[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_loops_one_way() {
        // 0 <-> 1 -> 2 <-> 3
        let succ = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        let comps = strongly_connected(4, &succ);
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn transient_vertex_is_its_own_component() {
        let succ = vec![vec![1], vec![1]];
        let comps = strongly_connected(2, &succ);
        assert_eq!(comps, vec![vec![0], vec![1]]);
        assert!(!is_nontrivial(&comps[0], &succ));
        assert!(is_nontrivial(&comps[1], &succ));
    }
}
