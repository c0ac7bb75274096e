use posat_core::deporder::DepOrder;
use posat_core::LevelSlot;
use proptest::prelude::*;

/// Reference relation with its transitive closure by Floyd–Warshall.
struct Oracle {
    live: Vec<bool>,
    edge: Vec<Vec<bool>>,
}

impl Oracle {
    fn closure(&self) -> Vec<Vec<bool>> {
        let n = self.live.len();
        let mut c = self.edge.clone();
        for k in 0..n {
            let through = c[k].clone();
            for row in c.iter_mut() {
                if row[k] {
                    for (x, &y) in row.iter_mut().zip(&through) {
                        *x |= y;
                    }
                }
            }
        }
        c
    }
}

#[derive(Clone, Debug)]
enum Op {
    Edge(usize, usize),
    /// Deletes a level with all its dependents, as a backtrack does.
    Delete(usize),
}

fn ops(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<Op>)> {
    let rank = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
    let op = prop_oneof![
        4 => (0..n, 0..n).prop_map(|(a, b)| Op::Edge(a, b)),
        1 => (1..n).prop_map(Op::Delete),
    ];
    (rank, prop::collection::vec(op, 0..60))
}

fn slot(i: usize) -> LevelSlot {
    LevelSlot(i as u32)
}

fn sorted(mut v: Vec<LevelSlot>) -> Vec<usize> {
    v.sort();
    v.into_iter().map(|s| s.index()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn queries_match_floyd_warshall((rank, ops) in ops(12)) {
        let n = rank.len();
        let mut orders = [DepOrder::new(usize::MAX), DepOrder::new(0)];
        let mut oracle = Oracle { live: vec![false; n], edge: vec![vec![false; n]; n] };
        for o in &mut orders {
            for i in 1..n {
                o.register(slot(i));
            }
        }
        oracle.live.iter_mut().for_each(|l| *l = true);
        // ground is slot 0 and gets rank below everyone
        let rank_of = |i: usize| if i == 0 { 0 } else { rank[i] + 1 };

        for op in ops {
            match op {
                Op::Edge(a, b) => {
                    // orient by rank so the relation stays acyclic
                    let (j, i) = if rank_of(a) < rank_of(b) { (a, b) } else { (b, a) };
                    if i == j || !oracle.live[i] || !oracle.live[j] || i == 0 {
                        continue;
                    }
                    let fresh = !oracle.edge[j][i] && j != 0;
                    for o in &mut orders {
                        prop_assert_eq!(o.add_dep(slot(j), slot(i)), fresh);
                    }
                    if j != 0 {
                        oracle.edge[j][i] = true;
                    }
                }
                Op::Delete(a) => {
                    if !oracle.live[a] {
                        continue;
                    }
                    let c = oracle.closure();
                    let mut dead: Vec<LevelSlot> = (0..n).filter(|&i| c[a][i]).map(slot).collect();
                    dead.push(slot(a));
                    for o in &mut orders {
                        o.remove_levels(&dead);
                    }
                    for d in dead {
                        let d = d.index();
                        oracle.live[d] = false;
                        for x in 0..n {
                            oracle.edge[d][x] = false;
                            oracle.edge[x][d] = false;
                        }
                    }
                }
            }
        }

        let c = oracle.closure();
        let live: Vec<usize> = (0..n).filter(|&i| oracle.live[i]).collect();
        prop_assert!(orders[0].matrix_enabled());
        prop_assert!(!orders[1].matrix_enabled());
        for o in &mut orders {
            prop_assert!(o.check_transpose().is_ok());
            prop_assert!(o.check_acyclic().is_ok());
            prop_assert_eq!(o.num_live(), live.len());
            for &a in &live {
                let up: Vec<usize> = live.iter().copied().filter(|&i| c[a][i]).collect();
                let down: Vec<usize> = live.iter().copied().filter(|&i| c[i][a] && i != 0).collect();
                prop_assert_eq!(sorted(o.dependents_closure(slot(a))), up);
                prop_assert_eq!(sorted(o.dependencies_closure(slot(a))), down);
                for &b in &live {
                    prop_assert_eq!(o.has_dep(slot(a), slot(b)), oracle.edge[a][b]);
                    prop_assert_eq!(o.reaches(slot(a), slot(b)), c[a][b]);
                }
            }
            // maximal elements of every prefix of the live set
            for k in 1..=live.len() {
                let set: Vec<usize> = live[..k].iter().copied().filter(|&i| i != 0).collect();
                let expected: Vec<usize> = set
                    .iter()
                    .copied()
                    .filter(|&x| !set.iter().any(|&y| c[x][y]))
                    .collect();
                let slots: Vec<LevelSlot> = set.iter().map(|&i| slot(i)).collect();
                prop_assert_eq!(sorted(o.maximal_of(&slots)), expected);
            }
        }
    }
}
