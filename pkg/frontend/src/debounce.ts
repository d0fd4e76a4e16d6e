/** Trailing-edge debouncer; a new call cancels the pending one. */

export class Debouncer {
  private handle: ReturnType<typeof setTimeout> | undefined;

  constructor(readonly delayMs = 30) {}

  run(op: () => void): void {
    if (this.handle !== undefined) clearTimeout(this.handle);
    this.handle = setTimeout(() => {
      this.handle = undefined;
      op();
    }, this.delayMs);
  }

  cancel(): void {
    if (this.handle !== undefined) clearTimeout(this.handle);
    this.handle = undefined;
  }
}
