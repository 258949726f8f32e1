use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tiling_owf::compile::compile_to_tiles;
use tiling_owf::dist::{m_decode, m_encode, perfect_round, Measure};
use tiling_owf::gf2::FieldElement;
use tiling_owf::owf::{compress_to_length, public_constant, sibling_separate, CandidateFunction};
use tiling_owf::tiling::{example_tiles, tiling_expansion, TileSet};
use tiling_owf::tm::{force_length, library, program_prefix_embed, tm_run, words_up_to, Machine};
use tiling_owf::Bits;

#[test]
fn text_formats_round_trip() {
    let ts = example_tiles(true);
    assert_eq!(TileSet::parse(&ts.to_text()).unwrap(), ts);

    for name in ["identity", "not", "increment", "flip-last"] {
        let m = library::by_name(name).unwrap();
        assert_eq!(Machine::parse(&m.to_text()).unwrap(), m, "{name}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for size in [2, 7, 20] {
        let m = Measure::random(&mut rng, size, 50).unwrap();
        assert_eq!(Measure::parse(&m.to_text()).unwrap(), m);
    }
}

#[test]
fn compiled_tiles_survive_serialisation() {
    let f = force_length(&library::not());
    let c = compile_to_tiles(&f).unwrap();
    let reparsed = TileSet::parse(&c.tiles().to_text()).unwrap();
    let w = f.parse_word("0110").unwrap();
    let top = c.encode(&w, 6).unwrap();
    let (bottom, _) = tiling_expansion(&top, &reparsed).unwrap();
    assert_eq!(c.decode(&bottom).unwrap(), tm_run(&f, &w, 5).unwrap());
}

#[test]
fn prefix_embedding_runs_only_on_matching_inputs() {
    let m = library::not();
    let p = m.parse_word("10").unwrap();
    let e = program_prefix_embed(&m, &p).unwrap();
    for w in words_up_to(&e, &["0", "1"], 5) {
        let out = tm_run(&e, &w, 64).unwrap();
        if w.starts_with(&p) {
            let payload = tm_run(&m, &w[p.len()..], 64).unwrap();
            assert_eq!(&out[..p.len()], &w[..p.len()]);
            assert_eq!(e.format_word(&out[p.len()..]), m.format_word(&payload));
        } else {
            assert_eq!(out, w, "{}", e.format_word(&w));
        }
    }
}

#[test]
fn length_preserving_pipeline() {
    let n = 4;
    let f = CandidateFunction::square(n);
    for k in 0..=n {
        let a = FieldElement::new(n, 5).unwrap();
        for x in 0..1u64 << n {
            let out = sibling_separate(&f, &Bits::from_u64(x, n), k, &a).unwrap();
            assert_eq!(out.to_bits().len() as u32, out.bit_len());
            let c = public_constant(out.bit_len()).unwrap();
            assert_eq!(compress_to_length(&out, &c).unwrap().len() as u32, n);
        }
    }
}

#[test]
fn rounding_then_encoding_round_trips() {
    let m = Measure::parse("measure 5\n0 1/10\n1 2/10\n2 3/10\n3 1/10\n4 3/10\n").unwrap();
    let r = perfect_round(&m).unwrap();
    for x in 0..m.size() {
        let c = m_encode(&r, x).unwrap();
        assert_eq!(c.len() as u32, r.ell(x).unwrap());
        assert_eq!(m_decode(&r, &c).unwrap(), x);
    }
}
