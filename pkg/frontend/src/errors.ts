/** Error for anything wrong with the inputs: missing files, malformed
 * tables, unusable values.  The CLI prints the message and exits
 * nonzero; library callers can catch it. */
export class PlotError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "PlotError";
  }
}
