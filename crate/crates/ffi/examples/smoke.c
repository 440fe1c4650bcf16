#include <stdio.h>
#include "lattika.h"

int main(void) {
    const char *m3 = "{\"n\":5,\"covers\":[[0,1],[0,2],[0,3],[1,4],[2,4],[3,4]]}";
    LattikaLattice *l = NULL;
    if (lattika_lattice_from_json(m3, &l) != LATTIKA_STATUS_OK) {
        fprintf(stderr, "%s\n", lattika_last_error());
        return 1;
    }
    bool ext = false;
    lattika_check(l, "extending", &ext);
    char *form = NULL;
    lattika_canonical_form(l, &form);
    printf("extending=%d form=%s\n", ext, form);
    lattika_string_free(form);
    lattika_lattice_free(l);
    return 0;
}
