mod common;

use common::column_in_code_order;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use st2d::polar::PolarCode;
use st2d::st2d::*;

fn noiseless(t: &CodewordTrellis) -> LlrTrellis {
    t.map(|&b| if b == 0 { 50.0 } else { -50.0 })
}

fn worked_example() -> St2dConfig {
    let rates = [(4usize, 10usize), (8, 12), (12, 10)];
    let time: Vec<PolarCode> = rates
        .iter()
        .flat_map(|&(k, count)| std::iter::repeat_n(PolarCode::new(16, k, 1.0).unwrap(), count))
        .collect();
    let space = vec![PolarCode::new(64, 32, 1.0).unwrap(); 16];
    St2dConfig::new(Mode::TimeSpace, 64, 16, 4, time, space).unwrap()
}

#[test]
fn worked_example_256_bits() {
    let cfg = worked_example();
    assert_eq!(cfg.info_bits(), 256);
    let lengths = cfg.stream_lengths();
    assert_eq!(&lengths[..10], &[4; 10]);
    assert_eq!(&lengths[10..22], &[8; 12]);
    assert_eq!(&lengths[22..], &[12; 10]);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let info = BitStreams::random(&lengths, &mut rng);
    let t = encode_time_space(&info, &cfg).unwrap();
    assert_eq!(t.dims(), (64, 16));
    // The first 32 rows are the time codewords.
    for (s, (code, bits)) in cfg.time_codes().iter().zip(info.streams()).enumerate() {
        assert_eq!(t.row(s), code.encode(bits).unwrap().as_slice(), "stream {s}");
    }
    // Every column is a space codeword whose systematic part is that column
    // of the time codewords.
    for (c, code) in cfg.space_codes().iter().enumerate() {
        let x = column_in_code_order(&t, c, code);
        assert!(code.is_codeword(&x));
        let top = t.column(c)[..32].to_vec();
        assert_eq!(code.encode_systematic(&top).unwrap(), x);
    }
    assert_eq!(decode_time_space(&noiseless(&t), &cfg).unwrap(), info);
}

fn toy_configs() -> Vec<St2dConfig> {
    vec![
        St2dConfig::lowest_latency_2d(Mode::TimeSpace, 8, 4, 2, 4, 8, 1.0).unwrap(),
        St2dConfig::lowest_latency_2d(Mode::SpaceTime, 8, 4, 2, 2, 8, 1.0).unwrap(),
        St2dConfig::parallel_1d(8, 4, 2, 16, 1.0).unwrap(),
        St2dConfig::folded_1d(8, 4, 2, 8, 12, 1.0).unwrap(),
    ]
}

#[test]
fn all_zero_info_gives_all_zero_trellis() {
    for cfg in toy_configs().into_iter().chain([worked_example()]) {
        let codec = St2dCodec::new(cfg.clone());
        let t = codec.encode(&BitStreams::zeros(&cfg.stream_lengths())).unwrap();
        assert!(t.as_slice().iter().all(|&b| b == 0), "{:?}", cfg.mode());
    }
}

#[test]
fn membership_on_random_toy_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let ts = St2dConfig::lowest_latency_2d(Mode::TimeSpace, 8, 4, 2, 4, 8, 1.0).unwrap();
    let st = St2dConfig::lowest_latency_2d(Mode::SpaceTime, 8, 4, 2, 2, 8, 1.0).unwrap();
    let (ts_codec, st_codec) = (St2dCodec::new(ts.clone()), St2dCodec::new(st.clone()));
    for _ in 0..1000 {
        let info = BitStreams::random(&ts.stream_lengths(), &mut rng);
        let t = ts_codec.encode(&info).unwrap();
        for (c, code) in ts.space_codes().iter().enumerate() {
            assert!(code.is_codeword(&column_in_code_order(&t, c, code)));
        }
        for (r, code) in ts.time_codes().iter().enumerate() {
            assert!(code.is_codeword(t.row(r)));
        }

        let info = BitStreams::random(&st.stream_lengths(), &mut rng);
        let t = st_codec.encode(&info).unwrap();
        let tt = t.transposed();
        for (r, code) in st.time_codes().iter().enumerate() {
            assert!(code.is_codeword(&column_in_code_order(&tt, r, code)));
        }
        for (c, code) in st.space_codes().iter().enumerate() {
            assert!(code.is_codeword(&t.column(c)));
        }
    }
}

#[test]
fn noiseless_roundtrip_all_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for cfg in toy_configs() {
        let mut codec = St2dCodec::new(cfg.clone());
        for _ in 0..200 {
            let info = BitStreams::random(&cfg.stream_lengths(), &mut rng);
            let t = codec.encode(&info).unwrap();
            assert_eq!(t.dims(), (cfg.layers(), cfg.width()));
            assert_eq!(codec.decode(&noiseless(&t)).unwrap(), info, "{:?}", cfg.mode());
        }
    }
}

fn tiny_ts() -> St2dConfig {
    let time = vec![PolarCode::new(4, 2, 1.0).unwrap(); 2];
    let space = vec![PolarCode::new(4, 2, 1.0).unwrap(); 4];
    St2dConfig::new(Mode::TimeSpace, 4, 4, 2, time, space).unwrap()
}

#[test]
fn erased_layer_is_recovered_by_space_code() {
    let cfg = tiny_ts();
    let mut codec = St2dCodec::new(cfg.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let info = BitStreams::random(&cfg.stream_lengths(), &mut rng);
        let t = codec.encode(&info).unwrap();
        for r in 0..4 {
            let mut llrs = noiseless(&t);
            llrs.row_mut(r).fill(0.0);
            assert_eq!(codec.decode(&llrs).unwrap(), info, "layer {r}");
        }
    }
}

#[test]
fn erased_column_is_recovered_by_time_code() {
    let cfg = tiny_ts();
    let mut codec = St2dCodec::new(cfg.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..50 {
        let info = BitStreams::random(&cfg.stream_lengths(), &mut rng);
        let t = codec.encode(&info).unwrap();
        for c in 0..4 {
            let mut llrs = noiseless(&t);
            for r in 0..4 {
                llrs.set(r, c, 0.0);
            }
            assert_eq!(codec.decode(&llrs).unwrap(), info, "column {c}");
        }
    }
}

#[test]
fn single_flipped_parity_llr_is_corrected() {
    // (8, 4) space code with minimum distance 4.
    let time = vec![PolarCode::new(4, 2, 1.0).unwrap(); 4];
    let space = vec![PolarCode::new(8, 4, 1.0).unwrap(); 4];
    let cfg = St2dConfig::new(Mode::TimeSpace, 8, 4, 2, time, space).unwrap();
    let mut codec = St2dCodec::new(cfg.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..50 {
        let info = BitStreams::random(&cfg.stream_lengths(), &mut rng);
        let t = codec.encode(&info).unwrap();
        for r in 4..8 {
            for c in 0..4 {
                let mut llrs = noiseless(&t);
                llrs.set(r, c, -llrs.get(r, c));
                assert_eq!(codec.decode(&llrs).unwrap(), info, "row {r} column {c}");
            }
        }
    }
}

#[test]
fn space_time_differs_from_time_space() {
    let time = vec![PolarCode::new(4, 2, 1.0).unwrap(); 2];
    let space = vec![PolarCode::new(4, 2, 1.0).unwrap(); 4];
    let ts = St2dConfig::new(Mode::TimeSpace, 4, 4, 2, time.clone(), space.clone()).unwrap();
    let st = St2dConfig::new(Mode::SpaceTime, 4, 4, 2, vec![time[0].clone(); 4], vec![space[0].clone(); 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut witnessed = false;
    for _ in 0..20 {
        let bits = BitStreams::random(&[4], &mut rng).flatten();
        let a = encode_time_space(&BitStreams::from_flat(&bits, &ts.stream_lengths()).unwrap(), &ts).unwrap();
        let b = encode_space_time(&BitStreams::from_flat(&bits, &st.stream_lengths()).unwrap(), &st).unwrap();
        witnessed |= a != b;
    }
    assert!(witnessed);
}

#[test]
fn rate_one_space_code_reduces_to_parallel_1d() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let par = St2dConfig::parallel_1d(8, 16, 4, 40, 1.0).unwrap();
    let ts = St2dConfig::new(
        Mode::TimeSpace,
        8,
        16,
        4,
        par.time_codes().to_vec(),
        vec![PolarCode::new(8, 8, 1.0).unwrap(); 16],
    )
    .unwrap();
    let (mut a, mut b) = (St2dCodec::new(par.clone()), St2dCodec::new(ts));
    for _ in 0..100 {
        let info = BitStreams::random(&par.stream_lengths(), &mut rng);
        let t = a.encode(&info).unwrap();
        assert_eq!(t, b.encode(&info).unwrap());
        let noisy = LlrTrellis::from_vec(
            8,
            16,
            t.as_slice()
                .iter()
                .enumerate()
                .map(|(i, &x)| 1.0 - 2.0 * x as f64 + ((i * 7919 % 13) as f64 - 6.0) * 0.3)
                .collect(),
        )
        .unwrap();
        assert_eq!(a.decode(&noisy).unwrap(), b.decode(&noisy).unwrap());
    }
}

#[test]
fn decoding_is_deterministic() {
    let cfg = St2dConfig::lowest_latency_2d(Mode::SpaceTime, 8, 4, 2, 2, 8, 1.0).unwrap();
    let zeros = LlrTrellis::filled(8, 4, 0.0);
    let a = decode_space_time(&zeros, &cfg).unwrap();
    let b = decode_space_time(&zeros, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn folded_mode_places_symbols_round_robin() {
    let cfg = St2dConfig::folded_1d(4, 4, 2, 16, 8, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let info = BitStreams::random(&cfg.stream_lengths(), &mut rng);
    let t = encode_1d(&info, &cfg).unwrap();
    let stream: Vec<u8> = cfg
        .time_codes()
        .iter()
        .zip(info.streams())
        .flat_map(|(c, b)| c.encode(b).unwrap())
        .collect();
    // Symbol i (two bits) sits on layer i mod 4 at symbol position i / 4.
    for i in 0..8 {
        let (l, m) = (i % 4, i / 4);
        assert_eq!(&t.row(l)[2 * m..2 * m + 2], &stream[2 * i..2 * i + 2]);
    }
    assert_eq!(decode_1d(&noiseless(&t), &cfg).unwrap(), info);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoding_is_linear(seed in any::<u64>(), mode in 0usize..4) {
        let cfg = toy_configs().swap_remove(mode);
        let codec = St2dCodec::new(cfg.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = BitStreams::random(&cfg.stream_lengths(), &mut rng);
        let v = BitStreams::random(&cfg.stream_lengths(), &mut rng);
        let sum = codec.encode(&u.xor(&v)).unwrap();
        let a = codec.encode(&u).unwrap();
        let b = codec.encode(&v).unwrap();
        let xor: Vec<u8> = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(sum.as_slice(), xor.as_slice());
    }
}
