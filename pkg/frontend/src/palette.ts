// Identity colors, same ten as the trajectory SVG renderer. Both assign by
// rank among the video's sorted identities, so overlay and plot agree.
export const IDENTITY_PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
  "#bcbd22",
  "#17becf",
] as const;

export function colorForRank(rank: number): string {
  return IDENTITY_PALETTE[rank % IDENTITY_PALETTE.length];
}
