use proptest::prelude::*;

use tiling_owf::tiling::{
    board_from_top, candidates, decode_instance, encode_instance, expand, expand_traced, tiling_expansion, Board, Letter,
    Line, SweepOrder, Tile, TileSet,
};

/// Small tile sets over letters 1..=4, duplicates removed.
fn tile_set() -> impl Strategy<Value = TileSet> {
    prop::collection::vec(prop::array::uniform4(1u32..=4), 1..=5).prop_map(|raw| {
        let mut tiles: Vec<Tile> = Vec::new();
        for [a, b, c, d] in raw {
            let t = Tile::new(Letter(a), Letter(b), Letter(c), Letter(d));
            if !tiles.contains(&t) {
                tiles.push(t);
            }
        }
        TileSet::new(5, tiles).unwrap()
    })
}

/// A tile set with a valid top line of length 1..=4.
fn instance() -> impl Strategy<Value = (TileSet, Line)> {
    (tile_set(), prop::collection::vec(any::<prop::sample::Index>(), 1..=4)).prop_filter_map(
        "top line must join",
        |(ts, picks)| {
            let line = Line(picks.iter().map(|p| Some(p.index(ts.len()))).collect());
            board_from_top(&line, &ts).ok().map(|_| (ts, line))
        },
    )
}

/// Candidate lookup by scanning every tile against every placed neighbour.
fn naive_candidates(b: &Board, ts: &TileSet, r: usize, c: usize) -> Vec<usize> {
    let n = b.side();
    (0..ts.len())
        .filter(|&i| {
            let t = ts.tile(i).unwrap();
            let ok = |rr: usize, cc: usize, f: &dyn Fn(&Tile) -> bool| b.get(rr, cc).is_none_or(|j| f(ts.tile(j).unwrap()));
            (r == 0 || ok(r - 1, c, &|o| o.sw == t.nw && o.se == t.ne))
                && (r + 1 >= n || ok(r + 1, c, &|o| o.nw == t.sw && o.ne == t.se))
                && (c == 0 || ok(r, c - 1, &|o| o.ne == t.nw && o.se == t.sw))
                && (c + 1 >= n || ok(r, c + 1, &|o| o.nw == t.ne && o.sw == t.se))
        })
        .collect()
}

fn naive_expand(start: &Board, ts: &TileSet) -> Board {
    let mut b = start.clone();
    let n = b.side();
    loop {
        let mut placed = false;
        for r in 0..n {
            for c in 0..n {
                if b.get(r, c).is_some() {
                    continue;
                }
                let has_nb = (r > 0 && b.get(r - 1, c).is_some())
                    || (c > 0 && b.get(r, c - 1).is_some())
                    || (r + 1 < n && b.get(r + 1, c).is_some())
                    || (c + 1 < n && b.get(r, c + 1).is_some());
                if !has_nb {
                    continue;
                }
                let cands = naive_candidates(&b, ts, r, c);
                if cands.len() == 1 {
                    b.set_unchecked(r, c, Some(cands[0]));
                    placed = true;
                }
            }
        }
        if !placed {
            return b;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn expansion_is_idempotent((ts, top) in instance()) {
        let b = expand(&board_from_top(&top, &ts).unwrap(), &ts);
        prop_assert_eq!(expand(&b, &ts), b);
    }

    #[test]
    fn expansion_extends_and_stays_consistent((ts, top) in instance()) {
        let start = board_from_top(&top, &ts).unwrap();
        let b = expand(&start, &ts);
        for r in 0..b.side() {
            for c in 0..b.side() {
                if let Some(t) = start.get(r, c) {
                    prop_assert_eq!(b.get(r, c), Some(t));
                }
            }
        }
        prop_assert!(b.validate(&ts).is_ok());
        prop_assert!(b.placed() >= start.placed());
    }

    #[test]
    fn expansion_is_deterministic((ts, top) in instance()) {
        let start = board_from_top(&top, &ts).unwrap();
        let a = expand_traced(&start, &ts, SweepOrder::RowMajor);
        let b = expand_traced(&start, &ts, SweepOrder::RowMajor);
        prop_assert_eq!(a.board, b.board);
        prop_assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn matches_brute_force_oracle((ts, top) in instance()) {
        prop_assume!(top.len() <= 3);
        let start = board_from_top(&top, &ts).unwrap();
        prop_assert_eq!(expand(&start, &ts), naive_expand(&start, &ts));
    }

    #[test]
    fn indexed_candidates_match_scan((ts, top) in instance()) {
        let b = expand(&board_from_top(&top, &ts).unwrap(), &ts);
        for r in 0..b.side() {
            for c in 0..b.side() {
                if b.get(r, c).is_none() {
                    prop_assert_eq!(candidates(&b, &ts, r, c).unwrap(), naive_candidates(&b, &ts, r, c));
                }
            }
        }
    }

    #[test]
    fn every_forced_placement_had_one_candidate((ts, top) in instance()) {
        let start = board_from_top(&top, &ts).unwrap();
        let ex = expand_traced(&start, &ts, SweepOrder::ColumnMajor);
        let mut b = start.clone();
        for p in &ex.trace {
            prop_assert_eq!(candidates(&b, &ts, p.row, p.col).unwrap(), vec![p.tile]);
            b.set_unchecked(p.row, p.col, Some(p.tile));
        }
        prop_assert_eq!(b, ex.board);
    }

    #[test]
    fn instance_encoding_round_trips(
        ts in tile_set(),
        cells in prop::collection::vec(prop::option::of(any::<prop::sample::Index>()), 1..=8),
    ) {
        let line = Line(cells.iter().map(|c| c.map(|i| i.index(ts.len()))).collect());
        let bits = encode_instance(&line, &ts).unwrap();
        let (l2, t2) = decode_instance(&bits).unwrap();
        prop_assert_eq!(l2, line);
        prop_assert_eq!(t2, ts);
    }

    #[test]
    fn expansion_preserves_length((ts, top) in instance()) {
        let (bottom, ts2) = tiling_expansion(&top, &ts).unwrap();
        prop_assert_eq!(bottom.len(), top.len());
        prop_assert_eq!(&ts2, &ts);
        prop_assert_eq!(
            encode_instance(&bottom, &ts2).unwrap().len(),
            encode_instance(&top, &ts).unwrap().len()
        );
    }
}
