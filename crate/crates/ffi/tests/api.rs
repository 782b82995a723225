use std::ffi::{c_char, CStr, CString};
use std::ptr;

use penrose_virial_ffi::*;

fn fraction(f: impl Fn(*mut c_char, usize, *mut usize) -> PvStatus) -> String {
    let mut need = 0usize;
    assert_eq!(f(ptr::null_mut(), 0, &mut need), PvStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; need];
    assert_eq!(f(buf.as_mut_ptr(), buf.len(), ptr::null_mut()), PvStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned()
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; pv_last_error_length()];
    assert_eq!(unsafe { pv_last_error_message(buf.as_mut_ptr(), buf.len()) }, PvStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned()
}

#[test]
fn tree_round_trip() {
    unsafe {
        let mut star = ptr::null_mut();
        assert_eq!(pv_tree_from_prufer([1u8, 1].as_ptr(), 2, &mut star), PvStatus::Ok);
        let mut n = 0;
        assert_eq!(pv_tree_vertex_count(star, &mut n), PvStatus::Ok);
        assert_eq!(n, 4);
        let mut extra = 0;
        assert_eq!(pv_tree_penrose_extra_bits(star, &mut extra), PvStatus::Ok);
        assert_eq!(extra.count_ones(), 3);
        let mut l = 0;
        assert_eq!(pv_tree_max_splittability(star, &mut l), PvStatus::Ok);
        assert_eq!(l, 1);
        pv_tree_free(star);

        let mut path = ptr::null_mut();
        assert_eq!(pv_tree_from_edges(3, [1u8, 2, 2, 3].as_ptr(), 2, &mut path), PvStatus::Ok);
        assert_eq!(pv_tree_max_splittability(path, &mut l), PvStatus::Ok);
        assert_eq!(l, 2);
        let model_spec = CString::new("onepoint").unwrap();
        let mut model = ptr::null_mut();
        assert_eq!(pv_model_parse(model_spec.as_ptr(), &mut model), PvStatus::Ok);
        assert_eq!(fraction(|b, len, req| pv_tree_weight(model, path, b, len, req)), "1");
        pv_model_free(model);
        pv_tree_free(path);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut tree = ptr::null_mut();
        assert_eq!(pv_tree_from_prufer([9u8].as_ptr(), 1, &mut tree), PvStatus::InvalidArgument);
        assert!(tree.is_null());
        assert!(last_error().contains('9'));
        assert_eq!(pv_tree_from_edges(3, [1u8, 2, 1, 2].as_ptr(), 2, &mut tree), PvStatus::InvalidArgument);
        assert_eq!(pv_tree_vertex_count(ptr::null(), ptr::null_mut()), PvStatus::NullPointer);
        let mut out = 0u64;
        assert_eq!(pv_count_splittable(12, 1, &mut out), PvStatus::SizeOutOfRange);
        let bad = CString::new("lattice:a=0").unwrap();
        let mut model = ptr::null_mut();
        assert_eq!(pv_model_parse(bad.as_ptr(), &mut model), PvStatus::InvalidArgument);
        let msg = CStr::from_ptr(pv_status_message(PvStatus::SizeOutOfRange));
        assert_eq!(msg.to_str().unwrap(), "size outside the supported range");
        pv_tree_free(ptr::null_mut());
    }
}

#[test]
fn coefficient_tables() {
    unsafe {
        let spec = CString::new("lattice:a=2").unwrap();
        let mut model = ptr::null_mut();
        assert_eq!(pv_model_parse(spec.as_ptr(), &mut model), PvStatus::Ok);
        let mut table = ptr::null_mut();
        assert_eq!(pv_coefficients_compute(model, 4, PvRoute::PenroseTrees, true, &mut table), PvStatus::Ok);
        let mut nmax = 0;
        assert_eq!(pv_table_nmax(table, &mut nmax), PvStatus::Ok);
        assert_eq!(nmax, 4);
        let betas: Vec<String> =
            (1..=4).map(|n| fraction(|b, len, req| pv_table_beta(table, n, b, len, req))).collect();
        assert_eq!(betas, ["1", "3", "14", "90"]);
        assert_eq!(fraction(|b, len, req| pv_table_b(table, 2, b, len, req)), "-3");
        let mut need = 0;
        assert_eq!(pv_table_beta(table, 5, ptr::null_mut(), 0, &mut need), PvStatus::InvalidArgument);
        pv_table_free(table);
        pv_model_free(model);
    }
}

#[test]
fn partition_and_bounds() {
    unsafe {
        let mut summary = PvPartitionSummary::default();
        assert_eq!(pv_verify_partition(4, false, &mut summary), PvStatus::Ok);
        assert_eq!((summary.connected_count, summary.covered, summary.violations), (38, 38, 0));
        let mut count = 0;
        assert_eq!(pv_count_splittable(5, 1, &mut count), PvStatus::Ok);
        assert_eq!(count, 27);
        let mut r = PvBoundResult::default();
        assert_eq!(pv_radius_bound(1.0, 1e-13, &mut r), PvStatus::Ok);
        assert!((r.radius_coeff - r.alpha).abs() < 1e-12);
        assert_eq!(pv_radius_bound(-1.0, 1e-13, &mut r), PvStatus::InvalidArgument);
    }
}
