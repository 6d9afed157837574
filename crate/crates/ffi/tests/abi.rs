use std::ffi::{CStr, CString};
use std::ptr;

use cvclone_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cvc_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn new_cloner(n: usize, m: usize, variant: CvcVariant) -> *mut CvcCloner {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cvc_cloner_new(n, m, variant as u32, &mut c) }, CvcStatus::Ok);
    assert!(!c.is_null());
    c
}

#[test]
fn optimal_values() {
    let mut f = 0.0;
    unsafe {
        assert_eq!(cvc_optimal_fidelity(2, 3, &mut f), CvcStatus::Ok);
        assert!((f - 6.0 / 7.0).abs() < 1e-15);
        assert_eq!(cvc_optimal_added_variance(1, 2, &mut f), CvcStatus::Ok);
        assert!((f - 0.5).abs() < 1e-15);
        assert_eq!(cvc_optimal_fidelity(3, 2, &mut f), CvcStatus::InvalidArgument);
        assert_eq!(cvc_optimal_fidelity(1, 2, ptr::null_mut()), CvcStatus::NullPointer);
    }
    assert!(last_error().contains("null"));
}

#[test]
fn report_through_handles() {
    for variant in [CvcVariant::Dft, CvcVariant::Msplitter, CvcVariant::Percopy] {
        let c = new_cloner(2, 5, variant);
        let mut r = ptr::null_mut();
        unsafe {
            assert_eq!(cvc_report_new(c, 1.0, -0.5, 0.0, &mut r), CvcStatus::Ok);
            let mut count = 0;
            assert_eq!(cvc_report_num_clones(r, &mut count), CvcStatus::Ok);
            assert_eq!(count, 5);
            for i in 0..count {
                let mut f = 0.0;
                assert_eq!(cvc_report_clone_fidelity(r, i, &mut f), CvcStatus::Ok);
                assert!((f - 10.0 / 13.0).abs() < 1e-10);
                let mut moments = [0.0; 6];
                assert_eq!(cvc_report_clone_moments(r, i, moments.as_mut_ptr(), 6), CvcStatus::Ok);
                assert!((moments[0] - 2f64.sqrt()).abs() < 1e-10);
                assert!((moments[1] + 0.5 * 2f64.sqrt()).abs() < 1e-10);
                assert!((moments[2] - (0.5 + 0.5 - 0.2)).abs() < 1e-10);
            }
            let mut f = 0.0;
            assert_eq!(cvc_report_clone_fidelity(r, count, &mut f), CvcStatus::IndexOutOfRange);
            let mut saturated = false;
            assert_eq!(cvc_report_saturated(r, &mut saturated), CvcStatus::Ok);
            assert!(saturated);
            let mut json = ptr::null_mut();
            assert_eq!(cvc_report_to_json(r, &mut json), CvcStatus::Ok);
            let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
            cvc_string_free(json);
            assert!(text.contains("\"saturated\": true"));
            cvc_report_free(r);
            cvc_cloner_free(c);
        }
    }
}

#[test]
fn state_access() {
    let c = new_cloner(1, 2, CvcVariant::Msplitter);
    unsafe {
        let mut n_modes = 0;
        assert_eq!(cvc_cloner_n_modes(c, &mut n_modes), CvcStatus::Ok);
        assert_eq!(n_modes, 3);
        let mut s = ptr::null_mut();
        assert_eq!(cvc_cloner_run(c, 2.0, 1.0, 0.0, &mut s), CvcStatus::Ok);
        let mut mean = vec![0.0; 6];
        assert_eq!(cvc_state_mean(s, mean.as_mut_ptr(), 6), CvcStatus::Ok);
        let r2 = 2f64.sqrt();
        let expected = [2.0 * r2, r2, 2.0 * r2, r2, 2.0 * r2, -r2];
        for (a, b) in mean.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(cvc_state_mean(s, mean.as_mut_ptr(), 5), CvcStatus::BufferTooSmall);
        let mut cov = vec![0.0; 36];
        assert_eq!(cvc_state_cov(s, cov.as_mut_ptr(), 36), CvcStatus::Ok);
        assert!((cov[0] - 1.0).abs() < 1e-12 && (cov[4 * 6 + 4] - 1.5).abs() < 1e-12);
        for i in 0..6 {
            for j in 0..6 {
                assert!((cov[i * 6 + j] - cov[j * 6 + i]).abs() < 1e-12);
            }
        }
        let mut f = 0.0;
        assert_eq!(cvc_state_fidelity_coherent(s, 1, 2.0, 1.0, &mut f), CvcStatus::Ok);
        assert!((f - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(
            cvc_state_fidelity_coherent(s, 3, 2.0, 1.0, &mut f),
            CvcStatus::IndexOutOfRange
        );
        cvc_state_free(s);
        cvc_cloner_free(c);
    }
}

#[test]
fn structure_and_modes() {
    let c = new_cloner(3, 5, CvcVariant::Msplitter);
    unsafe {
        let (mut bs, mut amp) = (0, 0);
        assert_eq!(cvc_cloner_beam_splitter_count(c, &mut bs), CvcStatus::Ok);
        assert_eq!(cvc_cloner_amplifier_count(c, &mut amp), CvcStatus::Ok);
        assert_eq!((bs, amp), (6, 1));
        let mut modes = [usize::MAX; 8];
        let mut len = 0;
        assert_eq!(cvc_cloner_clone_modes(c, modes.as_mut_ptr(), 2, &mut len), CvcStatus::BufferTooSmall);
        assert_eq!(len, 5);
        assert_eq!(cvc_cloner_clone_modes(c, modes.as_mut_ptr(), 8, &mut len), CvcStatus::Ok);
        assert_eq!(&modes[..5], &[0, 1, 2, 3, 4]);
        cvc_cloner_free(c);
    }
}

#[test]
fn json_round_trip() {
    let c = new_cloner(2, 4, CvcVariant::Percopy);
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(cvc_cloner_to_json(c, &mut json), CvcStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(cvc_cloner_from_json(json, &mut back), CvcStatus::Ok);
        cvc_string_free(json);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(cvc_report_new(c, 0.3, 0.4, 0.0, &mut a), CvcStatus::Ok);
        assert_eq!(cvc_report_new(back, 0.3, 0.4, 0.0, &mut b), CvcStatus::Ok);
        for i in 0..4 {
            let (mut fa, mut fb) = (0.0, 0.0);
            cvc_report_clone_fidelity(a, i, &mut fa);
            cvc_report_clone_fidelity(b, i, &mut fb);
            assert!((fa - fb).abs() < 1e-12);
        }
        cvc_report_free(a);
        cvc_report_free(b);
        cvc_cloner_free(c);
        cvc_cloner_free(back);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(cvc_cloner_new(4, 3, 1, &mut c), CvcStatus::InvalidArgument);
        assert!(c.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(cvc_cloner_new(1, 2, 7, &mut c), CvcStatus::InvalidArgument);
        assert!(last_error().contains("variant"));

        let bad = CString::new(r#"{"n_modes": 1}"#).unwrap();
        assert_eq!(cvc_cloner_from_json(bad.as_ptr(), &mut c), CvcStatus::InvalidArgument);
        let invalid_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(
            cvc_cloner_from_json(invalid_utf8.as_ptr().cast(), &mut c),
            CvcStatus::InvalidUtf8
        );
        assert_eq!(cvc_cloner_from_json(ptr::null(), &mut c), CvcStatus::NullPointer);

        let mut n = 0;
        assert_eq!(cvc_cloner_n_modes(ptr::null(), &mut n), CvcStatus::NullPointer);
        let ok = new_cloner(1, 2, CvcVariant::Dft);
        assert!(last_error().is_empty());
        let mut s = ptr::null_mut();
        assert_eq!(cvc_cloner_run(ok, f64::NAN, 0.0, 0.0, &mut s), CvcStatus::InvalidArgument);
        cvc_cloner_free(ok);

        cvc_cloner_free(ptr::null_mut());
        cvc_state_free(ptr::null_mut());
        cvc_report_free(ptr::null_mut());
        cvc_string_free(ptr::null_mut());
    }
}
