import fixtures from "./fixtures/worked_module.json";
import { BarcodeResponse, BettiResponse, Fetcher, ModuleInfo } from "../src/api.js";

export const MODULE: ModuleInfo = fixtures.module as ModuleInfo;
export const BETTI: BettiResponse = fixtures.betti as unknown as BettiResponse;
export const BARCODES: Record<string, BarcodeResponse> =
  fixtures.barcodes as unknown as Record<string, BarcodeResponse>;

/** Rebuild the fixture key from a request URL. */
export function fixtureKey(url: string): string {
  const u = new URL(url, "http://local");
  const q = u.searchParams;
  const kind = q.get("kind") ?? "finite";
  const norm = q.get("normalized") === "true" ? "true" : "false";
  return [
    kind,
    q.get("slope") ?? "",
    q.get("intercept") ?? "",
    q.get("x") ?? "",
    norm,
  ].join("|");
}

export function makeFetcher(log?: string[]): Fetcher {
  return async (url: string) => {
    if (url.endsWith("/betti")) return BETTI;
    const key = fixtureKey(url);
    log?.push(key);
    const hit = BARCODES[key];
    if (!hit) throw new Error(`no fixture for ${key} (${url})`);
    return hit;
  };
}
