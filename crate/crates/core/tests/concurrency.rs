use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use parsssp::labpq::{ArrayPq, LabPq, QueueMode, TournamentTree};
use parsssp::DistanceMap;

fn pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap()
}

/// Many workers lower distances and update concurrently; every queue must
/// afterwards extract exactly the touched ids, with the final keys.
#[test]
fn concurrent_write_min_and_update() {
    let pool = pool();
    let n = 50_000;
    for round in 0..5u64 {
        let dist = Arc::new(DistanceMap::new(n));
        let mut tree = TournamentTree::new(dist.clone(), n);
        let mut array = ArrayPq::new(dist.clone(), n);
        if round % 2 == 1 {
            array.set_mode(QueueMode::Dense);
        }
        let ops: Vec<(u32, u64)> = {
            let mut rng = ChaCha8Rng::seed_from_u64(round);
            (0..200_000).map(|_| (rng.gen_range(0..n as u32 / 2), rng.gen_range(0..1 << 30))).collect()
        };
        pool.install(|| {
            ops.par_iter().for_each(|&(id, d)| {
                if dist.write_min(id, d) {
                    tree.update(id);
                    array.update(id);
                }
            })
        });
        let mut want: Vec<u32> = ops.iter().map(|&(id, _)| id).collect();
        want.sort_unstable();
        want.dedup();
        let expect_min: u64 = ops.iter().map(|&(_, d)| d).min().unwrap();
        assert_eq!(tree.len(), want.len());
        assert_eq!(array.len(), want.len());
        assert_eq!(tree.min_key(), expect_min);
        assert_eq!(array.min_key(), expect_min);
        let half = 1 << 29;
        let below: Vec<u32> = want.iter().copied().filter(|&id| dist.get(id) <= half).collect();
        pool.install(|| {
            assert_eq!(tree.extract(half), below);
            assert_eq!(array.extract(half), below);
        });
        tree.sync();
        tree.check_synced().unwrap();
        let rest: Vec<u32> = want.iter().copied().filter(|&id| dist.get(id) > half).collect();
        assert_eq!(tree.extract(u64::MAX), rest);
        assert_eq!(array.extract(u64::MAX), rest);
    }
}

#[test]
fn concurrent_writers_on_one_cell() {
    let pool = pool();
    let dist = DistanceMap::new(1);
    let wins: usize = pool.install(|| {
        (0..100_000u64).into_par_iter().map(|d| dist.write_min(0, 100_000 - d) as usize).sum()
    });
    assert_eq!(dist.get(0), 1);
    assert!(wins >= 1);
}
