/** Number and label rendering. Values reach the screen exactly as the
 * service sent them: no rounding, no locale formatting.
 */

export function formatNumber(value: number): string {
  return String(value);
}

export function rankLabel(rank: number, exAequo: boolean): string {
  return exAequo ? `${rank} ex aequo` : String(rank);
}

export function formatWeight(weight: number): string {
  return String(weight);
}

/** Signed rendering for comparison deltas, keeping the exact magnitude. */
export function formatDelta(value: number): string {
  if (value > 0) {
    return `+${String(value)}`;
  }
  return String(value);
}
