/** JSON message types shared with the typing service (one object per frame). */
/** Width:height proportion for rendering the normalized unit square.
 *
 * The layout file carries no physical dimensions; keys are drawn square-ish
 * by scaling the unit square so that a median letter key's on-screen cell is
 * as wide as it is tall.
 */
export function layoutAspect(layout) {
    const letters = Object.entries(layout.keys).filter(([k]) => k.length === 1);
    if (letters.length === 0)
        return 2.5;
    const ratios = letters.map(([, g]) => g.h / g.w).sort((a, b) => a - b);
    return ratios[Math.floor(ratios.length / 2)];
}
