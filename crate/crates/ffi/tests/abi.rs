use std::ffi::{CStr, CString};
use std::ptr;

use fq_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fq_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    let owned = CStr::from_ptr(s).to_string_lossy().into_owned();
    fq_string_free(s);
    owned
}

#[test]
fn face_count_and_errors() {
    let mut faces = 0;
    assert_eq!(unsafe { fq_face_count(6, 2, &mut faces) }, FqStatus::Ok);
    assert_eq!(faces, 4);
    assert_eq!(last_error(), "");
    assert_eq!(
        unsafe { fq_face_count(7, 2, &mut faces) },
        FqStatus::Tessellation
    );
    assert!(last_error().contains("8/3"), "{}", last_error());
    assert_eq!(
        unsafe { fq_face_count(6, 2, ptr::null_mut()) },
        FqStatus::NullArgument
    );
}

#[test]
fn complex_lifecycle_and_json_round_trip() {
    unsafe {
        let mut complex = ptr::null_mut();
        assert_eq!(fq_complex_build_block(6, 2, &mut complex), FqStatus::Ok);
        let (mut f, mut e, mut v) = (0, 0, 0);
        assert_eq!(
            fq_complex_counts(complex, &mut f, &mut e, &mut v),
            FqStatus::Ok
        );
        assert_eq!((f, e, v), (4, 12, 6));

        let mut passed = false;
        assert_eq!(
            fq_complex_validate(complex, 2, &mut passed, ptr::null_mut()),
            FqStatus::Ok
        );
        assert!(passed);

        let mut json = ptr::null_mut();
        assert_eq!(fq_complex_to_json(complex, &mut json), FqStatus::Ok);
        let text = take_string(json);
        let c_text = CString::new(text.clone()).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(
            fq_complex_from_json(c_text.as_ptr(), &mut back),
            FqStatus::Ok
        );
        let mut json2 = ptr::null_mut();
        assert_eq!(fq_complex_to_json(back, &mut json2), FqStatus::Ok);
        assert_eq!(take_string(json2), text);

        fq_complex_free(back);
        fq_complex_free(complex);
        fq_complex_free(ptr::null_mut());
    }
}

#[test]
fn bad_json_is_an_invalid_argument() {
    let text = CString::new("{\"format\": \"fq-loops/1\"}").unwrap();
    let mut complex = ptr::null_mut();
    assert_eq!(
        unsafe { fq_complex_from_json(text.as_ptr(), &mut complex) },
        FqStatus::InvalidArgument
    );
    assert!(complex.is_null());
    assert!(last_error().contains("fq-complex/1"));
}

#[test]
fn subdivide_color_certify() {
    unsafe {
        let mut rect = ptr::null_mut();
        assert_eq!(fq_complex_build_rect(8, 1, 2, &mut rect), FqStatus::Ok);

        let mut coloring = ptr::null_mut();
        assert_eq!(
            fq_color(rect, false, &mut coloring),
            FqStatus::Contradiction
        );
        assert!(coloring.is_null());
        assert!(last_error().contains("contradiction"));

        let (mut fine, mut map) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(
            fq_complex_subdivide(rect, 2, 1, &mut fine, &mut map),
            FqStatus::Ok
        );
        assert!(take_string(map).contains("fq-subdiv/1"));

        assert_eq!(fq_color(fine, true, &mut coloring), FqStatus::Ok);
        let mut len = 0;
        assert_eq!(
            fq_coloring_colors(coloring, ptr::null_mut(), 0, &mut len),
            FqStatus::Ok
        );
        assert_eq!(len, 12);
        let mut colors = vec![9u8; len];
        assert_eq!(
            fq_coloring_colors(coloring, colors.as_mut_ptr(), len, &mut len),
            FqStatus::Ok
        );
        assert!(colors.iter().all(|&c| c <= 1));

        let q = [3u64, 2, 9, 2, 3, 2];
        let (mut certified, mut cert) = (false, ptr::null_mut());
        assert_eq!(
            fq_certify(
                fine,
                coloring,
                q.as_ptr(),
                q.len(),
                &mut certified,
                &mut cert
            ),
            FqStatus::Ok
        );
        assert!(certified);
        assert!(take_string(cert).contains("fq-cert/1"));

        let short = [2u64, 2];
        assert_eq!(
            fq_certify(
                fine,
                coloring,
                short.as_ptr(),
                short.len(),
                &mut certified,
                ptr::null_mut()
            ),
            FqStatus::Lattice
        );

        fq_coloring_free(coloring);
        fq_complex_free(fine);
        fq_complex_free(rect);
    }
}

#[test]
fn decide_verdicts() {
    let mut verdict = FqVerdict::Unknown;
    let q = [2u64, 3, 2, 3, 2, 3];
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { fq_decide(6, q.as_ptr(), q.len(), 2, true, &mut verdict, &mut json) },
        FqStatus::Ok
    );
    assert_eq!(verdict, FqVerdict::Exists);
    assert!(unsafe { take_string(json) }.contains("\"certified\": true"));

    let q = [2u64, 3, 4, 5, 2, 3, 4, 5];
    assert_eq!(
        unsafe {
            fq_decide(
                8,
                q.as_ptr(),
                q.len(),
                2,
                false,
                &mut verdict,
                ptr::null_mut(),
            )
        },
        FqStatus::Ok
    );
    assert_eq!(verdict, FqVerdict::RuledOut);

    let q = [1u64, 3, 2, 3, 2, 3];
    assert_eq!(
        unsafe {
            fq_decide(
                6,
                q.as_ptr(),
                q.len(),
                2,
                false,
                &mut verdict,
                ptr::null_mut(),
            )
        },
        FqStatus::Lattice
    );
    assert_eq!(
        unsafe { fq_decide(6, ptr::null(), 6, 2, false, &mut verdict, ptr::null_mut()) },
        FqStatus::NullArgument
    );
}
