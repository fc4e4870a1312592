/* Minimal tour of the C API: build two spaces, compute the document for
 * the identity mapping, print the JSON, and compare against a stretched
 * copy. Build from the crate root with:
 *
 *   cargo build -p matchdiag-capi
 *   cc examples/demo.c -Iinclude ../../target/debug/libmatchdiag_capi.a -lm -o demo
 */

#include <stdio.h>
#include <stdlib.h>

#include "matchdiag.h"

static void check(MdStatus status, const char *what) {
    if (status != MD_STATUS_OK) {
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)status, md_last_error_message());
        exit(1);
    }
}

int main(void) {
    const double near_coords[] = {0.0, 1.0, 3.0};
    const double far_coords[] = {0.0, 1.5, 4.5};
    const size_t identity[] = {0, 1, 2};

    MdSpace *near_space = NULL;
    MdSpace *far_space = NULL;
    check(md_space_from_points(near_coords, 3, 1, &near_space), "md_space_from_points");
    check(md_space_from_points(far_coords, 3, 1, &far_space), "md_space_from_points");

    MdDocument *near_doc = NULL;
    MdDocument *far_doc = NULL;
    check(md_compute(near_space, near_space, identity, 3, false, 0.0, &near_doc), "md_compute");
    check(md_compute(far_space, far_space, identity, 3, false, 0.0, &far_doc), "md_compute");

    char *json = NULL;
    check(md_document_to_json(near_doc, &json), "md_document_to_json");
    printf("%s", json);
    md_string_free(json);

    double delta = 0.0;
    check(md_min_delta(near_doc, far_doc, &delta), "md_min_delta");
    printf("min delta between the two documents: %g\n", delta);

    md_document_free(far_doc);
    md_document_free(near_doc);
    md_space_free(far_space);
    md_space_free(near_space);
    return 0;
}
